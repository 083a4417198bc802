//! Text format for finite quantales:
//!
//! ```text
//! elements = [bot, x, top]
//! leq = [(bot, x), (x, top)]
//! tensor = { (bot, bot): bot, (bot, x): bot, (bot, top): bot,
//!            (x, x): bot, (x, top): x, (top, top): top }
//! unit = top
//! ```
//!
//! Reflexive order pairs may be omitted and the transitive closure of `leq`
//! is taken. A tensor entry given for `(a, b)` also fills `(b, a)` unless
//! that pair is listed explicitly. `#` starts a comment. Names containing
//! punctuation or spaces are written in double quotes.

use std::collections::HashMap;

use thiserror::Error;

use super::finite::{validate_finite_quantale, AxiomReport, FiniteQuantale, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantaleFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` entry")]
    MissingKey(&'static str),
    #[error("`{0}` given more than once")]
    DuplicateKey(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("tensor entry ({0}, {1}) given twice with different results")]
    AmbiguousTensor(String, String),
    #[error("tensor table has no entry for ({0}, {1})")]
    IncompleteTensor(String, String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("tables are well formed but not a quantale")]
    Axioms(AxiomReport),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Punct(char),
}

fn tokenize(src: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    for (lineno, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut word = String::new();
        let mut quoted = false;
        for c in line.chars() {
            if quoted {
                if c == '"' {
                    quoted = false;
                    out.push((lineno + 1, Tok::Word(std::mem::take(&mut word))));
                } else {
                    word.push(c);
                }
            } else if c == '"' && word.is_empty() {
                quoted = true;
            } else if c.is_whitespace() || "=[](){},:".contains(c) {
                if !word.is_empty() {
                    out.push((lineno + 1, Tok::Word(std::mem::take(&mut word))));
                }
                if !c.is_whitespace() {
                    out.push((lineno + 1, Tok::Punct(c)));
                }
            } else {
                word.push(c);
            }
        }
        if !word.is_empty() {
            out.push((lineno + 1, Tok::Word(word)));
        }
    }
    out
}

#[derive(Debug)]
enum Value {
    Word(String),
    List(Vec<Value>),
    Pair(String, String),
    Map(Vec<((String, String), String)>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.0)
    }

    fn err(&self, message: impl Into<String>) -> QuantaleFileError {
        QuantaleFileError::Syntax {
            line: self.line(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, c: char) -> Result<(), QuantaleFileError> {
        match self.next() {
            Some(Tok::Punct(p)) if p == c => Ok(()),
            Some(other) => {
                self.pos -= 1;
                Err(self.err(format!("expected `{c}`, found {other:?}")))
            }
            None => Err(self.err(format!("expected `{c}`, found end of input"))),
        }
    }

    fn word(&mut self) -> Result<String, QuantaleFileError> {
        match self.next() {
            Some(Tok::Word(w)) => Ok(w),
            other => {
                self.pos -= 1;
                Err(self.err(format!("expected a name, found {other:?}")))
            }
        }
    }

    fn pair(&mut self) -> Result<(String, String), QuantaleFileError> {
        self.expect('(')?;
        let a = self.word()?;
        self.expect(',')?;
        let b = self.word()?;
        self.expect(')')?;
        Ok((a, b))
    }

    fn value(&mut self) -> Result<Value, QuantaleFileError> {
        match self.peek() {
            Some(Tok::Punct('[')) => {
                self.pos += 1;
                let mut items = Vec::new();
                while self.peek() != Some(&Tok::Punct(']')) {
                    let item = match self.peek() {
                        Some(Tok::Punct('(')) => {
                            let (a, b) = self.pair()?;
                            Value::Pair(a, b)
                        }
                        _ => Value::Word(self.word()?),
                    };
                    items.push(item);
                    if self.peek() == Some(&Tok::Punct(',')) {
                        self.pos += 1;
                    } else if self.peek() != Some(&Tok::Punct(']')) {
                        return Err(self.err("expected `,` or `]`"));
                    }
                }
                self.expect(']')?;
                Ok(Value::List(items))
            }
            Some(Tok::Punct('{')) => {
                self.pos += 1;
                let mut entries = Vec::new();
                while self.peek() != Some(&Tok::Punct('}')) {
                    let key = self.pair()?;
                    self.expect(':')?;
                    let v = self.word()?;
                    entries.push((key, v));
                    if self.peek() == Some(&Tok::Punct(',')) {
                        self.pos += 1;
                    } else if self.peek() != Some(&Tok::Punct('}')) {
                        return Err(self.err("expected `,` or `}`"));
                    }
                }
                self.expect('}')?;
                Ok(Value::Map(entries))
            }
            Some(Tok::Word(_)) => Ok(Value::Word(self.word()?)),
            _ => Err(self.err("expected a value")),
        }
    }
}

/// Raw tables read from a quantale file, before axiom checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawQuantale {
    pub labels: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub tensor: Vec<Vec<usize>>,
    pub unit: usize,
}

impl RawQuantale {
    pub fn validate(&self) -> Result<AxiomReport, StructureError> {
        validate_finite_quantale(&self.labels, &self.leq, &self.tensor, self.unit)
    }
}

/// Parses the file into raw tables without checking quantale axioms.
pub fn parse_raw_quantale(src: &str) -> Result<RawQuantale, QuantaleFileError> {
    let mut p = Parser {
        toks: tokenize(src),
        pos: 0,
    };
    let mut entries: HashMap<String, Value> = HashMap::new();
    while p.peek().is_some() {
        let key = p.word()?;
        p.expect('=')?;
        let v = p.value()?;
        if !matches!(key.as_str(), "elements" | "leq" | "tensor" | "unit") {
            return Err(QuantaleFileError::UnknownKey(key));
        }
        if entries.insert(key.clone(), v).is_some() {
            return Err(QuantaleFileError::DuplicateKey(key));
        }
    }
    let syntax = |message: &str| QuantaleFileError::Syntax {
        line: 0,
        message: message.to_string(),
    };

    let labels: Vec<String> = match entries.remove("elements") {
        Some(Value::List(items)) => items
            .into_iter()
            .map(|v| match v {
                Value::Word(w) => Ok(w),
                _ => Err(syntax("`elements` must be a list of names")),
            })
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(syntax("`elements` must be a list of names")),
        None => return Err(QuantaleFileError::MissingKey("elements")),
    };
    let n = labels.len();
    let index: HashMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    if index.len() != n {
        let dup = labels
            .iter()
            .enumerate()
            .find(|(i, l)| labels[..*i].contains(l))
            .map(|(_, l)| l.clone())
            .unwrap_or_default();
        return Err(StructureError::DuplicateLabel(dup).into());
    }
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| QuantaleFileError::UnknownElement(name.to_string()))
    };

    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    match entries.remove("leq") {
        Some(Value::List(items)) => {
            for item in items {
                match item {
                    Value::Pair(a, b) => leq[lookup(&a)?][lookup(&b)?] = true,
                    _ => return Err(syntax("`leq` must be a list of pairs")),
                }
            }
        }
        Some(_) => return Err(syntax("`leq` must be a list of pairs")),
        None => return Err(QuantaleFileError::MissingKey("leq")),
    }
    // Warshall closure.
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }

    let mut explicit: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    match entries.remove("tensor") {
        Some(Value::Map(items)) => {
            for ((a, b), c) in items {
                let (a_i, b_i, c_i) = (lookup(&a)?, lookup(&b)?, lookup(&c)?);
                match explicit[a_i][b_i] {
                    Some(prev) if prev != c_i => {
                        return Err(QuantaleFileError::AmbiguousTensor(a, b))
                    }
                    _ => explicit[a_i][b_i] = Some(c_i),
                }
            }
        }
        Some(_) => return Err(syntax("`tensor` must be a map `{ (a, b): c, ... }`")),
        None => return Err(QuantaleFileError::MissingKey("tensor")),
    }
    let mut tensor = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            tensor[a][b] = explicit[a][b].or(explicit[b][a]).ok_or_else(|| {
                QuantaleFileError::IncompleteTensor(labels[a].clone(), labels[b].clone())
            })?;
        }
    }

    let unit = match entries.remove("unit") {
        Some(Value::Word(w)) => lookup(&w)?,
        Some(_) => return Err(syntax("`unit` must be a single element name")),
        None => return Err(QuantaleFileError::MissingKey("unit")),
    };
    Ok(RawQuantale {
        labels,
        leq,
        tensor,
        unit,
    })
}

/// Parses and validates a quantale file.
pub fn parse_quantale_file(src: &str) -> Result<FiniteQuantale, QuantaleFileError> {
    let raw = parse_raw_quantale(src)?;
    let report = raw.validate()?;
    if !report.passed {
        return Err(QuantaleFileError::Axioms(report));
    }
    Ok(FiniteQuantale::new(raw.labels, raw.leq, raw.tensor, raw.unit)
        .expect("validated tables build a quantale"))
}

fn quote(label: &str) -> String {
    if label.is_empty() || label.chars().any(|c| c.is_whitespace() || "=[](){},:#\"".contains(c)) {
        format!("\"{label}\"")
    } else {
        label.to_string()
    }
}

/// Writes the covering pairs of the order and the upper triangle of the tensor.
pub fn render_quantale_file(q: &FiniteQuantale) -> String {
    let labels: Vec<String> = q.labels().iter().map(|l| quote(l)).collect();
    let n = q.len();
    let mut out = format!("elements = [{}]\n", labels.join(", "));
    let covers: Vec<String> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            a != b
                && q.leq_idx(a, b)
                && !(0..n).any(|c| c != a && c != b && q.leq_idx(a, c) && q.leq_idx(c, b))
        })
        .map(|(a, b)| format!("({}, {})", labels[a], labels[b]))
        .collect();
    out.push_str(&format!("leq = [{}]\n", covers.join(", ")));
    out.push_str("tensor = {\n");
    for a in 0..n {
        for b in a..n {
            let c = q.tensor_idx(a, b);
            out.push_str(&format!("  ({}, {}): {},\n", labels[a], labels[b], labels[c]));
            if q.tensor_idx(b, a) != c {
                let c2 = q.tensor_idx(b, a);
                out.push_str(&format!("  ({}, {}): {},\n", labels[b], labels[a], labels[c2]));
            }
        }
    }
    out.push_str("}\n");
    out.push_str(&format!("unit = {}\n", labels[q.unit_index()]));
    out
}
