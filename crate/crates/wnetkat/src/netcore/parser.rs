//! Concrete syntax.
//!
//! ```text
//! file    := ["wnk" INT] [fields] policy
//! fields  := "fields" "{" (IDENT ":" "[" vals "]" ";")* "}"
//! policy  := choice
//! choice  := weigh (("⊕" | "+") weigh)*
//! weigh   := prefix weigh | seq
//! prefix  := "weight(" LIT ")" "@" | "⟨" LIT "⟩" "⊙"
//! seq     := disj (";" (disj | prefix weigh | ite | loop))*
//! disj    := conj (("|" | "∨") conj)*
//! conj    := neg (("&" | "∧") neg)*
//! neg     := ("!" | "¬") neg | post
//! post    := atom "*"*
//! atom    := "dup" | "skip" | "drop" | "true" | "false" | IDENT "=" VAL
//!          | IDENT "!=" VAL | IDENT ":=" VAL | "(" policy ")" | ite | loop
//! ite     := "if" disj "then" policy "else" choice
//! loop    := "while" disj "do" choice
//! ```
//!
//! Weight prefixes, conditionals and loops extend as far right as possible.
//! Predicate operators only accept filters as operands.

use crate::error::{ParseError, Result, WnkError};
use crate::semiring::SemiringHandle;

use super::ast::{Policy, Pred};
use super::FieldSchema;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Weight(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: &[(&str, &str)] = &[
    (":=", ":="),
    ("!=", "!="),
    ("≠", "!="),
    ("..", ".."),
    ("⊕", "+"),
    ("+", "+"),
    ("⊙", "@"),
    ("@", "@"),
    (";", ";"),
    ("(", "("),
    (")", ")"),
    ("*", "*"),
    ("⋆", "*"),
    ("=", "="),
    ("&", "&"),
    ("∧", "&"),
    ("|", "|"),
    ("∨", "|"),
    ("!", "!"),
    ("¬", "!"),
    ("{", "{"),
    ("}", "}"),
    ("[", "["),
    ("]", "]"),
    (":", ":"),
    (",", ","),
];

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, col, message: message.into() }
}

fn lex(src: &str) -> std::result::Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize, chars: &[char]| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    let starts_with = |i: usize, s: &str| {
        let n = s.chars().count();
        i + n <= chars.len() && chars[i..i + n].iter().copied().eq(s.chars())
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1, &chars);
            continue;
        }
        if c == '#' || starts_with(i, "//") {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1, &chars);
            }
            continue;
        }
        let (tl, tc) = (line, col);
        if c == '⟨' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '⟩' {
                j += 1;
            }
            if j >= chars.len() {
                return Err(err(tl, tc, "unterminated weight literal"));
            }
            let lit: String = chars[start..j].iter().collect();
            let n = j + 1 - i;
            advance(&mut i, &mut line, &mut col, n, &chars);
            out.push(Token { tok: Tok::Weight(lit.trim().to_string()), line: tl, col: tc });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '-') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n, &chars);
            if word == "weight" {
                let mut k = i;
                while k < chars.len() && chars[k].is_whitespace() && chars[k] != '\n' {
                    k += 1;
                }
                if k < chars.len() && chars[k] == '(' {
                    let start = k + 1;
                    let mut j = start;
                    while j < chars.len() && chars[j] != ')' {
                        j += 1;
                    }
                    if j >= chars.len() {
                        return Err(err(tl, tc, "unterminated weight literal"));
                    }
                    let lit: String = chars[start..j].iter().collect();
                    let n = j + 1 - i;
                    advance(&mut i, &mut line, &mut col, n, &chars);
                    out.push(Token { tok: Tok::Weight(lit.trim().to_string()), line: tl, col: tc });
                    continue;
                }
            }
            out.push(Token { tok: Tok::Ident(word), line: tl, col: tc });
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let num: String = chars[i..j].iter().collect();
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n, &chars);
            out.push(Token { tok: Tok::Num(num), line: tl, col: tc });
            continue;
        }
        match SYMBOLS.iter().find(|(s, _)| starts_with(i, s)) {
            Some((s, canon)) => {
                advance(&mut i, &mut line, &mut col, s.chars().count(), &chars);
                out.push(Token { tok: Tok::Sym(canon), line: tl, col: tc });
            }
            None => return Err(err(tl, tc, format!("unexpected character `{c}`"))),
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

const KEYWORDS: &[&str] =
    &["dup", "skip", "drop", "true", "false", "if", "then", "else", "while", "do", "weight", "fields"];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s) || s == "wnk"
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    schema: Option<&'a FieldSchema>,
    semiring: SemiringHandle,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, msg: impl Into<String>) -> ParseError {
        let t = self.peek();
        err(t.line, t.col, msg)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> std::result::Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{s}`, found {}", describe(&self.peek().tok))))
        }
    }

    fn expect_kw(&mut self, k: &str) -> std::result::Result<(), ParseError> {
        if self.is_kw(k) {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{k}`, found {}", describe(&self.peek().tok))))
        }
    }

    fn schema(&self) -> &'a FieldSchema {
        self.schema.expect("schema is set before parsing policies")
    }

    fn starts_prefix(&self) -> bool {
        matches!(self.peek().tok, Tok::Weight(_))
    }

    fn parse_choice(&mut self) -> std::result::Result<Policy, ParseError> {
        let mut p = self.parse_weigh()?;
        while self.eat_sym("+") {
            let q = self.parse_weigh()?;
            p = Policy::choice(p, q);
        }
        Ok(p)
    }

    fn parse_weigh(&mut self) -> std::result::Result<Policy, ParseError> {
        if self.starts_prefix() {
            let r = self.parse_prefix()?;
            let body = self.parse_weigh()?;
            return Ok(Policy::weigh(r, body));
        }
        self.parse_seq()
    }

    fn parse_prefix(&mut self) -> std::result::Result<crate::semiring::SemiringValue, ParseError> {
        let t = self.next();
        let Tok::Weight(lit) = t.tok else { unreachable!("checked by starts_prefix") };
        let v = self.semiring.parse(&lit).map_err(|e| err(t.line, t.col, e.to_string()))?;
        self.expect_sym("@")?;
        Ok(v)
    }

    fn parse_seq(&mut self) -> std::result::Result<Policy, ParseError> {
        let mut p = self.parse_disj()?;
        while self.eat_sym(";") {
            if self.starts_prefix() {
                let q = self.parse_weigh()?;
                return Ok(Policy::seq(p, q));
            }
            let q = self.parse_disj()?;
            p = Policy::seq(p, q);
        }
        Ok(p)
    }

    fn as_pred(&self, p: Policy, line: usize, col: usize, op: &str) -> std::result::Result<Pred, ParseError> {
        match p {
            Policy::Filter(t) => Ok(t),
            _ => Err(err(line, col, format!("operand of `{op}` must be a predicate"))),
        }
    }

    fn parse_disj(&mut self) -> std::result::Result<Policy, ParseError> {
        let mut p = self.parse_conj()?;
        while self.is_sym("|") {
            let t = self.next();
            let a = self.as_pred(p, t.line, t.col, "|")?;
            let q = self.parse_conj()?;
            let b = self.as_pred(q, t.line, t.col, "|")?;
            p = Policy::Filter(Pred::or(a, b));
        }
        Ok(p)
    }

    fn parse_conj(&mut self) -> std::result::Result<Policy, ParseError> {
        let mut p = self.parse_neg()?;
        while self.is_sym("&") {
            let t = self.next();
            let a = self.as_pred(p, t.line, t.col, "&")?;
            let q = self.parse_neg()?;
            let b = self.as_pred(q, t.line, t.col, "&")?;
            p = Policy::Filter(Pred::and(a, b));
        }
        Ok(p)
    }

    fn parse_neg(&mut self) -> std::result::Result<Policy, ParseError> {
        if self.is_sym("!") {
            let t = self.next();
            let q = self.parse_neg()?;
            let a = self.as_pred(q, t.line, t.col, "!")?;
            return Ok(Policy::Filter(Pred::not(a)));
        }
        self.parse_post()
    }

    fn parse_post(&mut self) -> std::result::Result<Policy, ParseError> {
        let mut p = self.parse_atom()?;
        while self.eat_sym("*") {
            p = Policy::star(p);
        }
        Ok(p)
    }

    fn parse_pred(&mut self) -> std::result::Result<Pred, ParseError> {
        let (line, col) = (self.peek().line, self.peek().col);
        let p = self.parse_disj()?;
        self.as_pred(p, line, col, "if/while")
    }

    fn parse_value(&mut self, f: usize) -> std::result::Result<u32, ParseError> {
        let t = self.next();
        let name = match &t.tok {
            Tok::Ident(s) | Tok::Num(s) => s.clone(),
            other => return Err(err(t.line, t.col, format!("expected a value, found {}", describe(other)))),
        };
        let schema = self.schema();
        schema
            .value_index(f, &name)
            .ok_or_else(|| err(t.line, t.col, format!("unknown value `{name}` for field `{}`", schema.field_name(f))))
    }

    fn parse_atom(&mut self) -> std::result::Result<Policy, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Sym("(") => {
                let p = self.parse_choice()?;
                self.expect_sym(")")?;
                Ok(p)
            }
            Tok::Ident(w) => match w.as_str() {
                "dup" => Ok(Policy::Dup),
                "skip" | "true" => Ok(Policy::skip()),
                "drop" | "false" => Ok(Policy::drop()),
                "if" => {
                    let g = self.parse_pred()?;
                    self.expect_kw("then")?;
                    let p = self.parse_choice()?;
                    self.expect_kw("else")?;
                    let q = self.parse_choice()?;
                    Ok(Policy::if_then_else(g, p, q))
                }
                "while" => {
                    let g = self.parse_pred()?;
                    self.expect_kw("do")?;
                    let p = self.parse_choice()?;
                    Ok(Policy::while_do(g, p))
                }
                kw if KEYWORDS.contains(&kw) => Err(err(t.line, t.col, format!("unexpected keyword `{kw}`"))),
                field => {
                    let schema = self.schema();
                    let f = schema
                        .field_index(field)
                        .ok_or_else(|| err(t.line, t.col, format!("unknown field `{field}`")))?;
                    if self.eat_sym("=") {
                        Ok(Policy::Filter(Pred::Test(f, self.parse_value(f)?)))
                    } else if self.eat_sym("!=") {
                        Ok(Policy::Filter(Pred::not(Pred::Test(f, self.parse_value(f)?))))
                    } else if self.eat_sym(":=") {
                        Ok(Policy::Assign(f, self.parse_value(f)?))
                    } else {
                        Err(self.error_here(format!("expected `=`, `!=` or `:=` after field `{field}`")))
                    }
                }
            },
            other => Err(err(t.line, t.col, format!("expected a policy, found {}", describe(other)))),
        }
    }

    fn parse_header(&mut self) -> std::result::Result<Option<Vec<(String, Vec<String>)>>, ParseError> {
        if self.is_kw("wnk") {
            self.next();
            let t = self.next();
            match t.tok {
                Tok::Num(ref v) if v == "1" => {}
                _ => return Err(err(t.line, t.col, "unsupported syntax version (expected `wnk 1`)")),
            }
        }
        if !self.is_kw("fields") {
            return Ok(None);
        }
        self.next();
        self.expect_sym("{")?;
        let mut fields = Vec::new();
        while !self.eat_sym("}") {
            let t = self.next();
            let name = match t.tok {
                Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => s,
                other => return Err(err(t.line, t.col, format!("expected a field name, found {}", describe(&other)))),
            };
            self.expect_sym(":")?;
            self.expect_sym("[")?;
            let mut values = Vec::new();
            while !self.eat_sym("]") {
                let t = self.next();
                match t.tok {
                    Tok::Num(lo) if self.is_sym("..") => {
                        self.next();
                        let h = self.next();
                        let Tok::Num(hi) = h.tok else {
                            return Err(err(h.line, h.col, "expected the upper end of a range"));
                        };
                        let (lo, hi): (u64, u64) = (
                            lo.parse().map_err(|_| err(t.line, t.col, "range bound too large"))?,
                            hi.parse().map_err(|_| err(h.line, h.col, "range bound too large"))?,
                        );
                        if hi < lo || hi - lo > 1_000_000 {
                            return Err(err(h.line, h.col, "bad range"));
                        }
                        values.extend((lo..=hi).map(|v| v.to_string()));
                    }
                    Tok::Num(v) | Tok::Ident(v) => values.push(v),
                    other => return Err(err(t.line, t.col, format!("expected a value, found {}", describe(&other)))),
                }
                if !self.is_sym("]") {
                    self.expect_sym(",")?;
                }
            }
            fields.push((name, values));
            if !self.is_sym("}") {
                self.expect_sym(";")?;
            }
        }
        Ok(Some(fields))
    }

    fn expect_eof(&self) -> std::result::Result<(), ParseError> {
        match self.peek().tok {
            Tok::Eof => Ok(()),
            ref other => Err(self.error_here(format!("unexpected {} after policy", describe(other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(s) => format!("`{s}`"),
        Tok::Weight(s) => format!("weight `{s}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses a policy body (no header) against `schema`.
pub fn parse_policy(text: &str, schema: &FieldSchema, semiring: SemiringHandle) -> Result<Policy> {
    let mut p = Parser { toks: lex(text)?, pos: 0, schema: Some(schema), semiring };
    let pol = p.parse_choice()?;
    p.expect_eof()?;
    Ok(pol)
}

/// Parses a standalone predicate such as `node=BAY & dst=NYC`.
pub fn parse_predicate(text: &str, schema: &FieldSchema) -> Result<Pred> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        schema: Some(schema),
        semiring: SemiringHandle::new(crate::SemiringKind::Boolean),
    };
    let t = p.parse_pred()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a header-only schema file (`fields { … }`).
pub fn parse_schema(text: &str) -> Result<FieldSchema> {
    let mut p =
        Parser { toks: lex(text)?, pos: 0, schema: None, semiring: SemiringHandle::new(crate::SemiringKind::Boolean) };
    let fields = p.parse_header()?.ok_or_else(|| WnkError::Parse(p.error_here("expected a `fields { … }` block")))?;
    p.expect_eof()?;
    FieldSchema::new(fields)
}

/// Parses a policy file. The schema comes from the file's header or, when
/// the header is absent, from `schema`.
pub fn parse_document(
    text: &str,
    schema: Option<&FieldSchema>,
    semiring: SemiringHandle,
) -> Result<(FieldSchema, Policy)> {
    let mut p = Parser { toks: lex(text)?, pos: 0, schema: None, semiring };
    let declared = match p.parse_header()? {
        Some(fields) => FieldSchema::new(fields)?,
        None => schema
            .cloned()
            .ok_or_else(|| WnkError::Parse(p.error_here("no `fields { … }` header and no schema given")))?,
    };
    let toks = std::mem::take(&mut p.toks);
    let pos = p.pos;
    let mut q = Parser { toks, pos, schema: Some(&declared), semiring };
    let pol = q.parse_choice()?;
    q.expect_eof()?;
    Ok((declared, pol))
}
