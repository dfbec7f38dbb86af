//! Text format for presentations.
//!
//! ```text
//! # comments run to the end of the line
//! p=2
//! gen a:4, b:4, z:4
//! central z
//! pow a^4 = z^2
//! comm [b,a] = z
//! ```
//!
//! Statements are separated by newlines or `;`. Whitespace is ignored.
//! Words are `1` or factors `name` / `name^k` joined by `*`, in generator
//! order, each exponent in `1..o`. Commutators are written `[later,earlier]`.
//! Relations that are not given are trivial. Generators must be declared in
//! a `gen` statement; statements may otherwise come in any order.

use super::{ExponentVector, PcError, PcPresentation, PresentationData};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), pos: Pos { line: 1, col: 1 } }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    /// Splits the input into statements of positioned tokens.
    fn statements(mut self) -> Result<Vec<Vec<(Tok, Pos)>>, PcError> {
        let mut out = vec![];
        let mut cur = vec![];
        while let Some(&c) = self.chars.peek() {
            let start = self.pos;
            match c {
                '\n' | ';' => {
                    self.bump();
                    if !cur.is_empty() {
                        out.push(std::mem::take(&mut cur));
                    }
                }
                '#' => {
                    while self.chars.peek().is_some_and(|&c| c != '\n') {
                        self.bump();
                    }
                }
                c if c.is_whitespace() => {
                    self.bump();
                }
                c if c.is_ascii_digit() => {
                    let mut s = String::new();
                    while let Some(&d) = self.chars.peek().filter(|d| d.is_ascii_digit()) {
                        s.push(d);
                        self.bump();
                    }
                    let v = s.parse().map_err(|_| syntax(start, "integer too large"))?;
                    cur.push((Tok::Int(v), start));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(&d) = self.chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                        s.push(d);
                        self.bump();
                    }
                    cur.push((Tok::Ident(s), start));
                }
                '=' | ':' | ',' | '^' | '*' | '[' | ']' => {
                    self.bump();
                    cur.push((Tok::Sym(c), start));
                }
                other => return Err(syntax(start, &format!("unexpected character `{other}`"))),
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
        Ok(out)
    }
}

fn syntax(pos: Pos, message: &str) -> PcError {
    PcError::Syntax { line: pos.line, col: pos.col, message: message.to_string() }
}

/// Factor of a word before name resolution.
type RawWord = Vec<(String, u64, Pos)>;

enum Stmt {
    Prime(u64, Pos),
    Gen(Vec<(String, u64)>),
    Pow { name: String, pos: Pos, exp: u64, word: RawWord },
    Comm { left: (String, Pos), right: (String, Pos), word: RawWord },
    Central(Vec<(String, Pos)>),
}

struct Cursor<'t> {
    toks: &'t [(Tok, Pos)],
    at: usize,
    end: Pos,
}

impl Cursor<'_> {
    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn done(&self) -> bool {
        self.at == self.toks.len()
    }

    fn next(&mut self) -> Option<&(Tok, Pos)> {
        let t = self.toks.get(self.at);
        self.at += 1;
        t
    }

    fn sym(&mut self, c: char) -> Result<(), PcError> {
        let pos = self.pos();
        match self.next() {
            Some((Tok::Sym(s), _)) if *s == c => Ok(()),
            _ => Err(syntax(pos, &format!("expected `{c}`"))),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if matches!(self.toks.get(self.at), Some((Tok::Sym(s), _)) if *s == c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), PcError> {
        let pos = self.pos();
        match self.next() {
            Some((Tok::Ident(s), p)) => Ok((s.clone(), *p)),
            _ => Err(syntax(pos, "expected a generator name")),
        }
    }

    fn int(&mut self) -> Result<u64, PcError> {
        let pos = self.pos();
        match self.next() {
            Some((Tok::Int(v), _)) => Ok(*v),
            _ => Err(syntax(pos, "expected an integer")),
        }
    }

    fn finish(&self) -> Result<(), PcError> {
        if self.done() {
            Ok(())
        } else {
            Err(syntax(self.pos(), "unexpected trailing input"))
        }
    }

    fn word(&mut self) -> Result<RawWord, PcError> {
        if matches!(self.toks.get(self.at), Some((Tok::Int(1), _))) {
            self.at += 1;
            return Ok(vec![]);
        }
        let mut out = vec![];
        loop {
            let (name, pos) = self.ident()?;
            let exp = if self.eat('^') { self.int()? } else { 1 };
            out.push((name, exp, pos));
            if !self.eat('*') {
                return Ok(out);
            }
        }
    }
}

fn parse_statement(toks: &[(Tok, Pos)]) -> Result<Stmt, PcError> {
    let (head, head_pos) = match &toks[0] {
        (Tok::Ident(s), p) => (s.as_str(), *p),
        (_, p) => return Err(syntax(*p, "expected a statement keyword")),
    };
    let last = toks.last().unwrap().1;
    let mut cur = Cursor { toks, at: 1, end: Pos { line: last.line, col: last.col + 1 } };
    let stmt = match head {
        "p" => {
            cur.sym('=')?;
            Stmt::Prime(cur.int()?, head_pos)
        }
        "gen" => {
            let mut gens = vec![];
            loop {
                let (name, _) = cur.ident()?;
                cur.sym(':')?;
                gens.push((name, cur.int()?));
                if !cur.eat(',') {
                    break;
                }
            }
            Stmt::Gen(gens)
        }
        "pow" => {
            let (name, pos) = cur.ident()?;
            cur.sym('^')?;
            let exp = cur.int()?;
            cur.sym('=')?;
            Stmt::Pow { name, pos, exp, word: cur.word()? }
        }
        "comm" => {
            cur.sym('[')?;
            let left = cur.ident()?;
            cur.sym(',')?;
            let right = cur.ident()?;
            cur.sym(']')?;
            cur.sym('=')?;
            Stmt::Comm { left, right, word: cur.word()? }
        }
        "central" => {
            let mut names = vec![cur.ident()?];
            while cur.eat(',') {
                names.push(cur.ident()?);
            }
            Stmt::Central(names)
        }
        other => return Err(syntax(head_pos, &format!("unknown statement `{other}`"))),
    };
    cur.finish()?;
    Ok(stmt)
}

struct Resolver {
    names: Vec<String>,
    orders: Vec<u64>,
}

impl Resolver {
    fn index(&self, name: &str, pos: Pos) -> Result<usize, PcError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| PcError::UnknownGenerator {
            name: name.to_string(),
            line: pos.line,
            col: pos.col,
        })
    }

    fn word(&self, raw: &RawWord) -> Result<ExponentVector, PcError> {
        let mut e = vec![0; self.names.len()];
        let mut prev: Option<usize> = None;
        for (name, exp, pos) in raw {
            let i = self.index(name, *pos)?;
            if prev.is_some_and(|p| p >= i) {
                return Err(syntax(*pos, "word is not in generator order"));
            }
            if *exp == 0 || *exp >= self.orders[i] {
                return Err(syntax(*pos, &format!("exponent of `{name}` must lie in 1..{}", self.orders[i])));
            }
            e[i] = *exp;
            prev = Some(i);
        }
        Ok(ExponentVector::new(e))
    }
}

impl PcPresentation {
    /// Parses and structurally validates a presentation.
    pub fn parse(text: &str) -> Result<PcPresentation, PcError> {
        let statements = Lexer::new(text)
            .statements()?
            .iter()
            .map(|s| parse_statement(s))
            .collect::<Result<Vec<_>, _>>()?;

        let mut prime = None;
        let mut generators = vec![];
        for s in &statements {
            match s {
                Stmt::Prime(p, pos) => {
                    if prime.replace(*p).is_some() {
                        return Err(syntax(*pos, "prime given twice"));
                    }
                }
                Stmt::Gen(g) => generators.extend(g.iter().cloned()),
                _ => {}
            }
        }
        let prime = prime.ok_or(PcError::MissingPrime)?;
        let r = Resolver {
            names: generators.iter().map(|(n, _)| n.clone()).collect(),
            orders: generators.iter().map(|&(_, o)| o).collect(),
        };
        let mut data = PresentationData { prime, generators, ..Default::default() };
        for s in &statements {
            match s {
                Stmt::Pow { name, pos, exp, word } => {
                    let i = r.index(name, *pos)?;
                    if *exp != r.orders[i] {
                        return Err(syntax(*pos, &format!("power must be `{name}^{}`", r.orders[i])));
                    }
                    data.power_relations.push((i, r.word(word)?));
                }
                Stmt::Comm { left, right, word } => {
                    let j = r.index(&left.0, left.1)?;
                    let i = r.index(&right.0, right.1)?;
                    data.commutator_relations.push((j, i, r.word(word)?));
                }
                Stmt::Central(names) => {
                    for (name, pos) in names {
                        data.central.push(r.index(name, *pos)?);
                    }
                }
                Stmt::Prime(..) | Stmt::Gen(_) => {}
            }
        }
        PcPresentation::new(data)
    }

    /// Parses a normal-form word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<ExponentVector, PcError> {
        let mut stmts = Lexer::new(text).statements()?;
        let toks = match stmts.len() {
            0 => return Err(syntax(Pos { line: 1, col: 1 }, "empty word")),
            1 => stmts.pop().unwrap(),
            _ => return Err(syntax(Pos { line: 1, col: 1 }, "a word is a single statement")),
        };
        let last = toks.last().unwrap().1;
        let mut cur = Cursor { toks: &toks, at: 0, end: Pos { line: last.line, col: last.col + 1 } };
        let raw = cur.word()?;
        cur.finish()?;
        Resolver { names: self.generators.clone(), orders: self.relative_orders.clone() }.word(&raw)
    }

    /// Canonical text form; [`PcPresentation::parse`] reads it back to an equal value.
    pub fn to_text(&self) -> String {
        let mut out = format!("p={}\n", self.prime);
        let gens: Vec<String> =
            self.generators.iter().zip(&self.relative_orders).map(|(g, o)| format!("{g}:{o}")).collect();
        out += &format!("gen {}\n", gens.join(", "));
        let central: Vec<&str> =
            (0..self.rank()).filter(|&i| self.central[i]).map(|i| self.generators[i].as_str()).collect();
        if !central.is_empty() {
            out += &format!("central {}\n", central.join(", "));
        }
        for i in 0..self.rank() {
            let w = &self.power_relations[i];
            if !w.is_identity() {
                out += &format!("pow {}^{} = {}\n", self.generators[i], self.relative_orders[i], self.format(w));
            }
        }
        for j in 0..self.rank() {
            for i in 0..j {
                let c = &self.commutators[j][i];
                if !c.is_identity() {
                    out += &format!("comm [{},{}] = {}\n", self.generators[j], self.generators[i], self.format(c));
                }
            }
        }
        out
    }
}
