//! Line-oriented instantiation wizard. Every prompt takes one line of
//! input, so a session can be replayed from a file.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use anyhow::{bail, Result};
use umlf::conformance::{EffectSummary, Trace};
use umlf::instantiate::{
    list_obligations, restrictions_for, AppClassSpec, InstantiationSpec, MethodImpl, Obligation,
};
use umlf::model::MopConfig;
use umlf::{Model, RestrictionClause, SequencePattern};

struct Session<'a, R, W> {
    input: &'a mut R,
    out: &'a mut W,
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl<R: BufRead, W: Write> Session<'_, R, W> {
    fn say(&mut self, line: impl AsRef<str>) -> Result<()> {
        writeln!(self.out, "{}", line.as_ref())?;
        Ok(())
    }

    fn ask(&mut self, prompt: &str) -> Result<String> {
        write!(self.out, "{prompt}: ")?;
        self.out.flush()?;
        let mut line = String::new();
        if self.input.read_line(&mut line)? == 0 {
            bail!("input ended while asking for {prompt}");
        }
        Ok(line.trim().to_string())
    }

    /// Comma- or space-separated identifiers; asks again on a bad name.
    fn names(&mut self, prompt: &str) -> Result<Vec<String>> {
        loop {
            let answer = self.ask(prompt)?;
            let names: Vec<String> = answer
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            match names.iter().find(|n| !is_ident(n)) {
                Some(bad) => self.say(format!("  `{bad}` is not a name"))?,
                None => return Ok(names),
            }
        }
    }

    fn name(&mut self, prompt: &str) -> Result<String> {
        loop {
            let answer = self.ask(prompt)?;
            if is_ident(&answer) {
                return Ok(answer);
            }
            self.say(format!("  `{answer}` is not a name"))?;
        }
    }

    fn flag(&mut self, prompt: &str) -> Result<bool> {
        loop {
            match self.ask(prompt)?.as_str() {
                "true" | "yes" | "y" => return Ok(true),
                "false" | "no" | "n" => return Ok(false),
                other => self.say(format!("  `{other}`: answer true or false"))?,
            }
        }
    }

    fn effects(&mut self, with_trace: bool) -> Result<EffectSummary> {
        let reads: BTreeSet<String> = self.names("    reads")?.into_iter().collect();
        let writes: BTreeSet<String> = self.names("    writes")?.into_iter().collect();
        let trace = if with_trace {
            // An empty answer records no trace; `[]` records an empty one.
            loop {
                let answer = self.ask("    trace")?;
                if answer.is_empty() {
                    break None;
                }
                let events: Vec<&str> = answer
                    .trim_start_matches('[')
                    .trim_end_matches(']')
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .collect();
                match events.iter().find(|e| !is_ident(e)) {
                    Some(bad) => self.say(format!("  `{bad}` is not an event name"))?,
                    None => break Some(Trace::new(events)),
                }
            }
        } else {
            None
        };
        Ok(EffectSummary {
            reads,
            writes,
            trace,
        })
    }

    fn echo(&mut self, clauses: &[RestrictionClause], patterns: &[&SequencePattern]) -> Result<()> {
        for c in clauses {
            self.say(format!("    restriction: {c}"))?;
        }
        for p in patterns {
            self.say(format!("    pattern: {p}"))?;
        }
        Ok(())
    }

    fn app_class(&mut self, ob: &Obligation, name: String) -> Result<AppClassSpec> {
        self.say(format!("  class {name} : {}", ob.interface))?;
        let mut methods = Vec::new();
        for required in &ob.abstract_methods {
            self.say(format!("  implement {}", required.signature()))?;
            let (clauses, patterns) = restrictions_for(ob, &required.name);
            self.echo(&clauses, &patterns)?;
            let mut imp = MethodImpl::new(&required.name);
            imp.params = required.params.clone();
            imp.effects = self.effects(!patterns.is_empty())?;
            methods.push(imp);
        }
        for extra in self.names(&format!("  new methods of {name}"))? {
            self.say(format!("  new method {extra}()"))?;
            let (clauses, _) = restrictions_for(ob, &extra);
            self.echo(&clauses, &[])?;
            let mut imp = MethodImpl::new(&extra);
            imp.effects = self.effects(false)?;
            methods.push(imp);
        }
        Ok(AppClassSpec {
            name,
            supertype: ob.interface.clone(),
            methods,
        })
    }
}

/// Asks for every piece of information the framework's obligations and MOP
/// classes need and returns the resulting spec.
pub fn run<R: BufRead, W: Write>(
    framework: &Model,
    input: &mut R,
    out: &mut W,
) -> Result<InstantiationSpec> {
    let obligations = list_obligations(framework)?;
    let mut s = Session { input, out };
    s.say(format!(
        "instantiating {}: {} extensible interface(s)",
        framework.name,
        obligations.len()
    ))?;
    let mut spec = InstantiationSpec::new(s.name("instance name")?, &framework.name);

    for ob in &obligations {
        s.say(format!("{} ({})", ob.interface, ob.timing))?;
        for m in &ob.abstract_methods {
            s.say(format!("  abstract {}", m.signature()))?;
        }
        let patterns: Vec<&SequencePattern> = ob.patterns.iter().collect();
        s.echo(&ob.clauses, &patterns)?;
        for name in s.names(&format!("application classes for {}", ob.interface))? {
            let class = s.app_class(ob, name)?;
            spec.classes.push(class);
        }
    }

    let mops = framework.classes.iter().filter(|c| {
        framework
            .relationships
            .iter()
            .any(|r| r.target == c.name && r.has_role("mop"))
    });
    for class in mops {
        s.say(format!("configure {}", class.name))?;
        let mut values = Vec::new();
        for attr in class.attributes.iter().filter(|a| a.type_name == "Boolean") {
            if let Some(note) = &attr.note {
                s.say(format!("  {}: {note}", attr.name))?;
            }
            values.push((attr.name.clone(), s.flag(&format!("  {}", attr.name))?));
        }
        spec.configs.push(MopConfig {
            class: class.name.clone(),
            values,
        });
    }
    Ok(spec)
}
