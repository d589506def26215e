//! Reader and writer for the plain-text BIF network format.
//!
//! Supported: an empty `network` block, `variable` blocks declaring
//! `type discrete [k] { s1, ..., sk };`, and `probability` blocks holding
//! either a `table` line or one `(states) p1, ..., pk;` row per parent
//! configuration. `//` and `/* */` comments are skipped. Any other construct,
//! including `property` and `default` entries, is a parse error.
//!
//! A `table` line for a node with parents lists whole rows in parent
//! configuration order (first parent most significant), node state fastest.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::DiscreteBayesNet;
use crate::error::{Error, Result};

/// Row sums further than this from 1 are rejected; closer rows are rescaled.
const RENORMALIZE_TOLERANCE: f64 = 1e-6;

pub fn read_bif(path: impl AsRef<Path>) -> Result<DiscreteBayesNet> {
    parse_bif(&std::fs::read_to_string(path)?)
}

pub fn write_bif(net: &DiscreteBayesNet, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_bif_string(net, None)?)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Punct(char),
}

const PUNCT: &[char] = &['{', '}', '(', ')', '[', ']', ',', ';', '|'];

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            line += 1;
            chars.next();
        } else if c.is_whitespace() {
            chars.next();
        } else if c == '/' && matches!(chars.clone().nth(1), Some('/' | '*')) {
            chars.next();
            match chars.next() {
                Some('/') => {
                    while chars.peek().is_some_and(|&c| c != '\n') {
                        chars.next();
                    }
                }
                Some('*') => {
                    let start = line;
                    let mut prev = ' ';
                    loop {
                        match chars.next() {
                            Some('/') if prev == '*' => break,
                            Some(c) => {
                                if c == '\n' {
                                    line += 1;
                                }
                                prev = c;
                            }
                            None => return Err(Error::Parse { line: start, msg: "unterminated comment".into() }),
                        }
                    }
                }
                _ => unreachable!(),
            }
        } else if PUNCT.contains(&c) {
            out.push((Tok::Punct(c), line));
            chars.next();
        } else {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || PUNCT.contains(&c) {
                    break;
                }
                if c == '/' && matches!(chars.clone().nth(1), Some('/' | '*')) {
                    break;
                }
                w.push(c);
                chars.next();
            }
            out.push((Tok::Word(w), line));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks.get(self.pos).or_else(|| self.toks.last()).map_or(1, |t| t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Result<Tok> {
        match self.toks.get(self.pos) {
            Some((t, _)) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.err("unexpected end of file"),
        }
    }

    fn punct(&mut self, c: char) -> Result<()> {
        match self.next()? {
            Tok::Punct(p) if p == c => Ok(()),
            t => {
                self.pos -= 1;
                self.err(format!("expected `{c}`, found {}", show(&t)))
            }
        }
    }

    fn word(&mut self) -> Result<String> {
        match self.next()? {
            Tok::Word(w) => Ok(w),
            t => {
                self.pos -= 1;
                self.err(format!("expected a name, found {}", show(&t)))
            }
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let w = self.word()?;
        if w != kw {
            self.pos -= 1;
            return self.err(format!("expected `{kw}`, found `{w}`"));
        }
        Ok(())
    }

    fn at_punct(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    /// `w1, w2, ...` up to (not including) the closing `close`.
    fn word_list(&mut self, close: char) -> Result<Vec<String>> {
        let mut out = vec![self.word()?];
        while self.at_punct(',') {
            self.pos += 1;
            out.push(self.word()?);
        }
        if !self.at_punct(close) {
            return self.err(format!("expected `,` or `{close}`"));
        }
        Ok(out)
    }

    fn numbers(&mut self) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        loop {
            let line = self.line();
            let w = self.word()?;
            let x: f64 = w.parse().map_err(|_| Error::Parse { line, msg: format!("invalid probability `{w}`") })?;
            out.push(x);
            if self.at_punct(',') {
                self.pos += 1;
            } else {
                self.punct(';')?;
                return Ok(out);
            }
        }
    }
}

fn show(t: &Tok) -> String {
    match t {
        Tok::Word(w) => format!("`{w}`"),
        Tok::Punct(c) => format!("`{c}`"),
    }
}

struct Variable {
    name: String,
    states: Vec<String>,
    line: usize,
}

enum Entry {
    Table(Vec<f64>),
    Row(Vec<String>, Vec<f64>),
}

struct Block {
    child: String,
    parents: Vec<String>,
    entries: Vec<(Entry, usize)>,
    line: usize,
}

pub fn parse_bif(text: &str) -> Result<DiscreteBayesNet> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let mut vars: Vec<Variable> = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();
    while p.peek().is_some() {
        let line = p.line();
        match p.word()?.as_str() {
            "network" => {
                p.word()?;
                p.punct('{')?;
                if !p.at_punct('}') {
                    return p.err("network properties are not supported");
                }
                p.punct('}')?;
            }
            "variable" => {
                let name = p.word()?;
                p.punct('{')?;
                p.keyword("type")?;
                p.keyword("discrete")?;
                p.punct('[')?;
                let kline = p.line();
                let k: usize =
                    p.word()?.parse().map_err(|_| Error::Parse { line: kline, msg: "state count must be a positive integer".into() })?;
                p.punct(']')?;
                p.punct('{')?;
                let states = p.word_list('}')?;
                p.punct('}')?;
                p.punct(';')?;
                p.punct('}')?;
                if states.len() != k {
                    return Err(Error::Parse {
                        line: kline,
                        msg: format!("variable `{name}` declares {k} states but lists {}", states.len()),
                    });
                }
                vars.push(Variable { name, states, line });
            }
            "probability" => {
                p.punct('(')?;
                let child = p.word()?;
                let mut parents = Vec::new();
                if p.at_punct('|') {
                    p.pos += 1;
                    parents = p.word_list(')')?;
                }
                p.punct(')')?;
                p.punct('{')?;
                let mut entries = Vec::new();
                while !p.at_punct('}') {
                    let eline = p.line();
                    if p.at_punct('(') {
                        p.pos += 1;
                        let cfg = p.word_list(')')?;
                        p.punct(')')?;
                        entries.push((Entry::Row(cfg, p.numbers()?), eline));
                    } else {
                        match p.word()?.as_str() {
                            "table" => entries.push((Entry::Table(p.numbers()?), eline)),
                            other => return Err(Error::Parse { line: eline, msg: format!("unsupported entry `{other}`") }),
                        }
                    }
                }
                p.punct('}')?;
                blocks.push(Block { child, parents, entries, line });
            }
            other => return Err(Error::Parse { line, msg: format!("unsupported block `{other}`") }),
        }
    }
    assemble(vars, blocks)
}

fn assemble(vars: Vec<Variable>, blocks: Vec<Block>) -> Result<DiscreteBayesNet> {
    let mut index = HashMap::new();
    for (i, v) in vars.iter().enumerate() {
        if index.insert(v.name.clone(), i).is_some() {
            return Err(Error::Parse { line: v.line, msg: format!("variable `{}` declared twice", v.name) });
        }
    }
    let n = vars.len();
    let mut parents: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut cpts: Vec<Vec<f64>> = vec![Vec::new(); n];
    for b in blocks {
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let Some(&v) = index.get(&b.child) else {
            return Err(perr(b.line, format!("probability for undeclared variable `{}`", b.child)));
        };
        if parents[v].is_some() {
            return Err(perr(b.line, format!("second probability block for `{}`", b.child)));
        }
        let ps = b
            .parents
            .iter()
            .map(|name| index.get(name).copied().ok_or_else(|| perr(b.line, format!("undeclared parent `{name}`"))))
            .collect::<Result<Vec<_>>>()?;
        let r = vars[v].states.len();
        let radix: Vec<usize> = ps.iter().map(|&p| vars[p].states.len()).collect();
        let q: usize = radix.iter().product();
        let mut table = vec![f64::NAN; q * r];
        for (entry, line) in b.entries {
            match entry {
                Entry::Table(xs) => {
                    if xs.len() != q * r {
                        return Err(perr(line, format!("table for `{}` has {} values, expected {}", b.child, xs.len(), q * r)));
                    }
                    table = xs;
                }
                Entry::Row(cfg, xs) => {
                    if cfg.len() != ps.len() {
                        return Err(perr(line, format!("row names {} parent states, expected {}", cfg.len(), ps.len())));
                    }
                    if xs.len() != r {
                        return Err(perr(line, format!("row has {} probabilities, expected {r}", xs.len())));
                    }
                    let mut j = 0;
                    for (&p, s) in ps.iter().zip(&cfg) {
                        let Some(k) = vars[p].states.iter().position(|x| x == s) else {
                            return Err(perr(line, format!("`{s}` is not a state of `{}`", vars[p].name)));
                        };
                        j = j * vars[p].states.len() + k;
                    }
                    table[j * r..(j + 1) * r].copy_from_slice(&xs);
                }
            }
        }
        for row in table.chunks_mut(r) {
            if row.iter().any(|x| x.is_nan()) {
                return Err(perr(b.line, format!("missing parent configuration in table for `{}`", b.child)));
            }
            if row.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                return Err(perr(b.line, format!("probability outside [0, 1] for `{}`", b.child)));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > RENORMALIZE_TOLERANCE {
                return Err(perr(b.line, format!("row of `{}` sums to {s}", b.child)));
            }
            if s != 1.0 {
                row.iter_mut().for_each(|x| *x /= s);
            }
        }
        parents[v] = Some(ps);
        cpts[v] = table;
    }
    let mut done = Vec::with_capacity(n);
    for (v, ps) in parents.into_iter().enumerate() {
        match ps {
            Some(ps) => done.push(ps),
            None => return Err(Error::Parse { line: vars[v].line, msg: format!("variable `{}` has no probability block", vars[v].name) }),
        }
    }
    let names = vars.iter().map(|v| v.name.clone()).collect();
    let states = vars.into_iter().map(|v| v.states).collect();
    DiscreteBayesNet::new(names, states, done, cpts).map_err(|e| match e {
        Error::Argument(msg) => Error::Parse { line: 1, msg },
        other => other,
    })
}

fn valid_word(s: &str) -> bool {
    !s.is_empty() && !s.contains("//") && !s.contains("/*") && !s.chars().any(|c| c.is_whitespace() || PUNCT.contains(&c))
}

/// Renders `net` as BIF text, preceded by `header` as `//` comment lines.
///
/// Probabilities are written with the shortest representation that parses
/// back to the same `f64`.
pub fn to_bif_string(net: &DiscreteBayesNet, header: Option<&str>) -> Result<String> {
    let mut s = String::new();
    if let Some(h) = header {
        for l in h.lines() {
            let _ = writeln!(s, "// {l}");
        }
    }
    for v in 0..net.n_nodes() {
        let name = &net.names()[v];
        if !valid_word(name) || !net.states(v).iter().all(|x| valid_word(x)) {
            return Err(Error::Argument(format!("`{name}` or one of its states cannot be written as a BIF name")));
        }
    }
    s.push_str("network unknown {\n}\n");
    for v in 0..net.n_nodes() {
        let _ = writeln!(
            s,
            "variable {} {{\n  type discrete [ {} ] {{ {} }};\n}}",
            net.names()[v],
            net.cardinality(v),
            net.states(v).join(", ")
        );
    }
    let join = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    for v in 0..net.n_nodes() {
        let ps = net.parents(v);
        let name = &net.names()[v];
        if ps.is_empty() {
            let _ = writeln!(s, "probability ( {name} ) {{\n  table {};\n}}", join(net.cpt(v)));
            continue;
        }
        let pnames: Vec<&str> = ps.iter().map(|&p| net.names()[p].as_str()).collect();
        let _ = writeln!(s, "probability ( {name} | {} ) {{", pnames.join(", "));
        let radix: Vec<usize> = ps.iter().map(|&p| net.cardinality(p)).collect();
        let q: usize = radix.iter().product();
        let mut digits = vec![0usize; ps.len()];
        for j in 0..q {
            let cfg: Vec<&str> = ps.iter().zip(&digits).map(|(&p, &d)| net.states(p)[d].as_str()).collect();
            let _ = writeln!(s, "  ({}) {};", cfg.join(", "), join(net.cpt_row(v, j)));
            for k in (0..digits.len()).rev() {
                digits[k] += 1;
                if digits[k] < radix[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
        s.push_str("}\n");
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str =
        "network unknown {\n}\nvariable A {\n  type discrete [ 2 ] { a0, a1 };\n}\nprobability ( A ) {\n  table 0.3, 0.7;\n}\n";

    #[test]
    fn minimal_file() {
        let net = parse_bif(TINY).unwrap();
        assert_eq!(net.n_nodes(), 1);
        assert_eq!(net.cpt(0), &[0.3, 0.7]);
        assert_eq!(parse_bif(&to_bif_string(&net, Some("seed 1")).unwrap()).unwrap(), net);
    }

    #[test]
    fn rows_and_tables_agree() {
        let rows = "variable A { type discrete [2] { x, y }; }
            variable B { type discrete [3] { p, q, r }; }
            probability (A) { table 0.5, 0.5; }
            // comment
            probability (B | A) { (y) 0.1, 0.2, 0.7; (x) 0.2, 0.3, 0.5; }";
        let table = rows.replace("(y) 0.1, 0.2, 0.7; (x) 0.2, 0.3, 0.5;", "table 0.2, 0.3, 0.5, 0.1, 0.2, 0.7;");
        let a = parse_bif(rows).unwrap();
        assert_eq!(a, parse_bif(&table).unwrap());
        assert_eq!(a.cpt_row(1, 1), &[0.1, 0.2, 0.7]);
    }

    #[test]
    fn renormalizes_only_small_errors() {
        let near = TINY.replace("0.3, 0.7", "0.3, 0.7000005");
        let row = parse_bif(&near).unwrap().cpt(0).to_vec();
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let far = TINY.replace("0.3, 0.7", "0.3, 0.71");
        assert!(matches!(parse_bif(&far), Err(Error::Parse { .. })));
    }

    #[test]
    fn reports_line_of_bad_syntax() {
        let bad = format!("{TINY}\n\nproperty foo;\n");
        match parse_bif(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 11),
            other => panic!("{other:?}"),
        }
        let prop = TINY.replace("{\n}", "{\n  property x;\n}");
        assert!(matches!(parse_bif(&prop), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn slash_inside_state_name() {
        let text = TINY.replace("a1 }", "Asy/Patch }/* c */").replace("table", "// x\n  table");
        let net = parse_bif(&text).unwrap();
        assert_eq!(net.states(0)[1], "Asy/Patch");
        assert_eq!(parse_bif(&to_bif_string(&net, None).unwrap()).unwrap(), net);
    }

    #[test]
    fn missing_rows_and_cycles() {
        let missing = "variable A { type discrete [2] { x, y }; }
            variable B { type discrete [2] { p, q }; }
            probability (A) { table 0.5, 0.5; }
            probability (B | A) { (y) 0.1, 0.9; }";
        assert!(matches!(parse_bif(missing), Err(Error::Parse { .. })));
        let cyclic = "variable A { type discrete [1] { x }; }
            variable B { type discrete [1] { p }; }
            probability (A | B) { (p) 1; }
            probability (B | A) { (x) 1; }";
        assert!(matches!(parse_bif(cyclic), Err(Error::Structure(_))));
    }
}
