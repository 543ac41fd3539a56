//! Line-oriented text formats for spanoids, set families, and codes.
//!
//! All three formats share the same shape: `#` starts a comment, blank
//! lines are skipped, and a header line `n <int>` precedes the content
//! lines (`rule <i1> .. -> <j>`, `set <i1> ..` / `set empty`, or one
//! word of space-separated symbols per line; codes declare `s <int>`
//! too). Element indices are 1-based in text and 0-based in the API;
//! alphabet symbols are literal values on both sides. Saved files start
//! with an identifying comment (`# spanoid v1`, `# family v1`,
//! `# code v1`) that parsers treat as an ordinary comment, so
//! hand-written files may omit it. Rendering is canonical: parsing a
//! rendered file and rendering again reproduces it byte for byte.

use crate::code::Code;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::spanoid::{Rule, Spanoid};
use crate::subset::Subset;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

/// Parse-time ceiling on declared ground sizes, guarding against
/// allocation from absurd headers; well below it, per-operation
/// capacity checks take over.
pub const PARSE_GROUND_MAX: usize = 1 << 20;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Content lines with their 1-based numbers; comments and blanks skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.trim();
        (!line.is_empty() && !line.starts_with('#')).then_some((k + 1, line))
    })
}

fn parse_number(token: &str, line: usize, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("{what} `{token}` is not a number")))
}

/// A 1-based element token, returned 0-based.
fn parse_element(token: &str, line: usize, n: usize) -> Result<u32> {
    let v = parse_number(token, line, "element")?;
    if v == 0 {
        return Err(parse_err(line, "element 0; indices are 1-based"));
    }
    if v > n {
        return Err(parse_err(line, format!("element {v} outside 1..={n}")));
    }
    Ok((v - 1) as u32)
}

fn declare(
    slot: &mut Option<usize>,
    mut tokens: std::str::SplitWhitespace<'_>,
    line: usize,
    what: &str,
    max: usize,
) -> Result<()> {
    if slot.is_some() {
        return Err(parse_err(line, format!("`{what}` declared twice")));
    }
    let token = tokens
        .next()
        .ok_or_else(|| parse_err(line, format!("`{what}` needs a value")))?;
    let value = parse_number(token, line, what)?;
    if value > max {
        return Err(parse_err(line, format!("{what} = {value} exceeds {max}")));
    }
    if tokens.next().is_some() {
        return Err(parse_err(line, format!("trailing input after `{what}`")));
    }
    *slot = Some(value);
    Ok(())
}

fn ground_of(n: Option<usize>, line: usize) -> Result<usize> {
    n.ok_or_else(|| parse_err(line, "`n` must be declared first"))
}

pub fn parse_spanoid(text: &str) -> Result<Spanoid> {
    let mut n: Option<usize> = None;
    let mut rules = Vec::new();
    for (line, content) in content_lines(text) {
        let mut tokens = content.split_whitespace();
        match tokens.next().expect("content line is nonempty") {
            "n" => declare(&mut n, tokens, line, "n", PARSE_GROUND_MAX)?,
            "rule" => {
                let n = ground_of(n, line)?;
                let mut premise = Vec::new();
                let mut saw_arrow = false;
                for token in tokens.by_ref() {
                    if token == "->" {
                        saw_arrow = true;
                        break;
                    }
                    premise.push(parse_element(token, line, n)?);
                }
                if !saw_arrow {
                    return Err(parse_err(line, "rule needs `->` before its conclusion"));
                }
                let conclusion = tokens
                    .next()
                    .ok_or_else(|| parse_err(line, "rule needs a conclusion after `->`"))?;
                let conclusion = parse_element(conclusion, line, n)?;
                if tokens.next().is_some() {
                    return Err(parse_err(line, "rule has more than one conclusion"));
                }
                rules.push(Rule::new(premise, conclusion));
            }
            other => return Err(parse_err(line, format!("unexpected keyword `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(1, "missing `n` declaration"))?;
    Spanoid::new(n, rules)
}

pub fn render_spanoid(sp: &Spanoid) -> String {
    let mut out = String::from("# spanoid v1\n");
    let _ = writeln!(out, "n {}", sp.ground_size());
    for rule in sp.rules() {
        out.push_str("rule");
        for &e in rule.premise() {
            let _ = write!(out, " {}", e + 1);
        }
        let _ = writeln!(out, " -> {}", rule.conclusion() + 1);
    }
    out
}

pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut n: Option<usize> = None;
    let mut sets = Vec::new();
    for (line, content) in content_lines(text) {
        let mut tokens = content.split_whitespace();
        match tokens.next().expect("content line is nonempty") {
            "n" => declare(&mut n, tokens, line, "n", PARSE_GROUND_MAX)?,
            "set" => {
                let n = ground_of(n, line)?;
                let first = tokens
                    .next()
                    .ok_or_else(|| parse_err(line, "set needs elements or `empty`"))?;
                let mut subset = Subset::empty(n);
                if first == "empty" {
                    if tokens.next().is_some() {
                        return Err(parse_err(line, "trailing input after `set empty`"));
                    }
                } else {
                    subset.insert(parse_element(first, line, n)?);
                    for token in tokens {
                        subset.insert(parse_element(token, line, n)?);
                    }
                }
                sets.push(subset);
            }
            other => return Err(parse_err(line, format!("unexpected keyword `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(1, "missing `n` declaration"))?;
    SetFamily::new(n, sets)
}

pub fn render_family(fam: &SetFamily) -> String {
    let mut out = String::from("# family v1\n");
    let _ = writeln!(out, "n {}", fam.ground_size());
    for subset in fam.iter() {
        if subset.is_empty() {
            out.push_str("set empty\n");
        } else {
            out.push_str("set");
            for e in subset.iter() {
                let _ = write!(out, " {}", e + 1);
            }
            out.push('\n');
        }
    }
    out
}

pub fn parse_code(text: &str) -> Result<Code> {
    let mut n: Option<usize> = None;
    let mut s: Option<usize> = None;
    let mut words: Vec<Vec<u32>> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut last_line = 1;
    for (line, content) in content_lines(text) {
        last_line = line;
        let mut tokens = content.split_whitespace();
        let first = tokens.next().expect("content line is nonempty");
        match first {
            "n" => declare(&mut n, tokens, line, "n", PARSE_GROUND_MAX)?,
            "s" => declare(&mut s, tokens, line, "s", u32::MAX as usize)?,
            _ => {
                let n = ground_of(n, line)?;
                let s = s.ok_or_else(|| parse_err(line, "`s` must be declared first"))?;
                let mut word = Vec::with_capacity(n);
                for token in std::iter::once(first).chain(tokens) {
                    let sym = parse_number(token, line, "symbol")?;
                    if sym >= s {
                        return Err(parse_err(
                            line,
                            format!("symbol {sym} outside alphabet 0..{s}"),
                        ));
                    }
                    word.push(sym as u32);
                }
                if word.len() != n {
                    return Err(parse_err(
                        line,
                        format!("word has {} symbols, expected {n}", word.len()),
                    ));
                }
                if !seen.insert(word.clone()) {
                    return Err(parse_err(line, "duplicate word"));
                }
                words.push(word);
            }
        }
    }
    let n = n.ok_or_else(|| parse_err(1, "missing `n` declaration"))?;
    let s = s.ok_or_else(|| parse_err(1, "missing `s` declaration"))?;
    if words.is_empty() {
        return Err(parse_err(last_line, "code has no words"));
    }
    Code::new(n, s as u32, words)
}

pub fn render_code(code: &Code) -> String {
    let mut out = String::from("# code v1\n");
    let _ = writeln!(out, "n {}", code.word_length());
    let _ = writeln!(out, "s {}", code.alphabet_size());
    for word in code.words() {
        let mut sep = "";
        for &sym in word {
            let _ = write!(out, "{sep}{sym}");
            sep = " ";
        }
        out.push('\n');
    }
    out
}

pub fn load_spanoid(path: impl AsRef<Path>) -> Result<Spanoid> {
    parse_spanoid(&std::fs::read_to_string(path)?)
}

pub fn save_spanoid(path: impl AsRef<Path>, sp: &Spanoid) -> Result<()> {
    Ok(std::fs::write(path, render_spanoid(sp))?)
}

pub fn load_family(path: impl AsRef<Path>) -> Result<SetFamily> {
    parse_family(&std::fs::read_to_string(path)?)
}

pub fn save_family(path: impl AsRef<Path>, fam: &SetFamily) -> Result<()> {
    Ok(std::fs::write(path, render_family(fam))?)
}

pub fn load_code(path: impl AsRef<Path>) -> Result<Code> {
    parse_code(&std::fs::read_to_string(path)?)
}

pub fn save_code(path: impl AsRef<Path>, code: &Code) -> Result<()> {
    Ok(std::fs::write(path, render_code(code))?)
}
