//! Parsers for the textual forms of ordinals, word terms, powerset elements
//! and order terms.
//!
//! ```text
//! ordinal  sum  := prod ('+' prod)*
//!          prod := atom ('*' NAT)?
//!          atom := 'w' ('^' atom)? | NAT | '(' sum ')'
//! word     seq  := item+        item := LETTER | '(' seq ')^w'
//! set      elem := LETTER | '{' elem (',' elem)* '}'
//! order    Base(chainN) | Base(antichainN) | Base(@file.json) | Singleton
//!          | H(ordinal) | Star(t) | Pfin(t) | PfinNE(t)
//!          | DisjointUnion(t, …) | Product(t, …) | LexProduct(t, …) | OrderedSum(t, …)
//! ```

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::canon::{PkElem, QkElem};
use crate::error::{Error, Result};
use crate::lower::PowElem;
use crate::ordinal::Ordinal;
use crate::words::WordTerm;
use crate::wqo::{Letter, PosetSpec, WpoTerm};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let found = match self.rest().chars().next() {
            Some(c) => format!(", found '{c}'"),
            None => ", found end of input".into(),
        };
        Error::parse(self.pos, format!("{}{found}", msg.into()))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn nat(&mut self) -> Result<BigUint> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        self.pos += digits.len();
        Ok(digits.parse().expect("digits"))
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let len: usize = self
            .rest()
            .chars()
            .take_while(|c| c.is_alphanumeric() || *c == '_')
            .map(char::len_utf8)
            .sum();
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Ok(s)
    }

    /// Consumes `w` or `ω` as a standalone token.
    fn eat_omega(&mut self) -> bool {
        self.skip_ws();
        let r = self.rest();
        let len = if r.starts_with('w') {
            1
        } else if r.starts_with('ω') {
            'ω'.len_utf8()
        } else {
            return false;
        };
        let next = r[len..].chars().next();
        if next.is_some_and(|c| c.is_alphanumeric() || c == '_') {
            return false;
        }
        self.pos += len;
        true
    }
}

fn ord_sum(c: &mut Cursor) -> Result<Ordinal> {
    let mut acc = ord_prod(c)?;
    while c.eat('+') {
        acc = acc.ord_add(&ord_prod(c)?);
    }
    Ok(acc)
}

fn ord_prod(c: &mut Cursor) -> Result<Ordinal> {
    let a = ord_atom(c)?;
    if c.eat('*') {
        let n = c.nat()?;
        return Ok(a.ord_mul(&Ordinal::from(n)));
    }
    Ok(a)
}

fn ord_atom(c: &mut Cursor) -> Result<Ordinal> {
    if c.eat_omega() {
        if c.eat('^') {
            return Ok(Ordinal::omega_pow(ord_atom(c)?));
        }
        return Ok(Ordinal::omega());
    }
    if c.eat('(') {
        let x = ord_sum(c)?;
        c.expect(')')?;
        return Ok(x);
    }
    match c.peek() {
        Some(d) if d.is_ascii_digit() => Ok(Ordinal::from(c.nat()?)),
        _ => Err(c.error("expected 'w', a number or '('")),
    }
}

/// Parses an ordinal expression into Cantor normal form.
pub fn parse_ordinal(text: &str) -> Result<Ordinal> {
    let mut c = Cursor::new(text);
    let x = ord_sum(&mut c)?;
    c.finish()?;
    Ok(x)
}

fn word_seq(c: &mut Cursor, letter: &mut dyn FnMut(&str, usize) -> Result<Letter>) -> Result<WordTerm> {
    let mut items = Vec::new();
    loop {
        match c.peek() {
            Some('(') => {
                c.pos += 1;
                if c.peek() == Some(')') {
                    return Err(c.error("empty w-power"));
                }
                let body = word_seq(c, letter)?;
                c.expect(')')?;
                c.expect('^')?;
                if !c.eat_omega() {
                    return Err(c.error("expected 'w' after '^'"));
                }
                items.push(WordTerm::OmegaPow(Box::new(body)));
            }
            Some(ch) if ch.is_alphanumeric() || ch == '_' => {
                let at = c.pos;
                let name = c.ident()?;
                items.push(WordTerm::Lit(letter(name, at)?));
            }
            _ => break,
        }
    }
    if items.is_empty() {
        return Err(c.error("expected a letter or '('"));
    }
    Ok(WordTerm::Cat(items).normalize())
}

fn parse_word_with(text: &str, letter: &mut dyn FnMut(&str, usize) -> Result<Letter>) -> Result<WordTerm> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "ε" {
        return Ok(WordTerm::Eps);
    }
    let mut c = Cursor::new(text);
    let w = word_seq(&mut c, letter)?;
    c.finish()?;
    Ok(w)
}

/// Parses a word term over the named letters of `alphabet`.
pub fn parse_word(text: &str, alphabet: &PosetSpec) -> Result<WordTerm> {
    parse_word_with(text, &mut |name, at| {
        alphabet
            .index_of(name)
            .ok_or_else(|| Error::parse(at, format!("unknown letter '{name}'")))
    })
}

/// Parses several word terms over the antichain of all letters they use,
/// numbered in order of first appearance.
pub fn parse_words_auto(texts: &[&str]) -> Result<(PosetSpec, Vec<WordTerm>)> {
    let mut names: Vec<String> = Vec::new();
    let mut out = Vec::new();
    for t in texts {
        out.push(parse_word_with(t, &mut |name, _| {
            Ok(match names.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    names.push(name.to_string());
                    names.len() - 1
                }
            })
        })?);
    }
    Ok((PosetSpec::discrete(names)?, out))
}

enum Nested {
    Leaf(Letter),
    Set(Vec<Nested>),
}

fn nested(c: &mut Cursor, alphabet: &PosetSpec) -> Result<Nested> {
    if c.eat('{') {
        let mut items = vec![nested(c, alphabet)?];
        while c.eat(',') {
            items.push(nested(c, alphabet)?);
        }
        c.expect('}')?;
        return Ok(Nested::Set(items));
    }
    let at = c.pos;
    let name = c.ident()?;
    alphabet
        .index_of(name)
        .map(Nested::Leaf)
        .ok_or_else(|| Error::parse(at, format!("unknown letter '{name}'")))
}

fn parse_nested(text: &str, alphabet: &PosetSpec) -> Result<Nested> {
    let mut c = Cursor::new(text);
    let n = nested(&mut c, alphabet)?;
    c.finish()?;
    Ok(n)
}

fn to_pk(n: Nested) -> PkElem {
    match n {
        Nested::Leaf(x) => PkElem::Letter(x),
        Nested::Set(items) => PkElem::Set(
            items
                .into_iter()
                .map(|i| {
                    let e = to_pk(i);
                    QkElem::new(e.min_level(), e)
                })
                .collect(),
        ),
    }
}

/// Parses nested braces over letters into `P_k`, inferring level tags: a
/// letter has tag 0 and a set one more than the largest tag inside it.
pub fn parse_pk(text: &str, alphabet: &PosetSpec) -> Result<PkElem> {
    Ok(to_pk(parse_nested(text, alphabet)?))
}

fn to_pow(n: Nested) -> PowElem {
    match n {
        Nested::Leaf(x) => PowElem::Atom(x),
        Nested::Set(items) => PowElem::Set(items.into_iter().map(to_pow).collect::<BTreeSet<_>>()),
    }
}

/// Parses nested braces over letters into an iterated powerset element.
pub fn parse_pow(text: &str, alphabet: &PosetSpec) -> Result<PowElem> {
    Ok(to_pow(parse_nested(text, alphabet)?))
}

/// Parses a whitespace- or comma-separated list of iterated powerset
/// elements, e.g. `{a} {a,b}`.
pub fn parse_pow_list(text: &str, alphabet: &PosetSpec) -> Result<Vec<PowElem>> {
    let mut c = Cursor::new(text);
    let mut out = Vec::new();
    while !c.at_end() {
        out.push(to_pow(nested(&mut c, alphabet)?));
        c.eat(',');
    }
    Ok(out)
}

fn wpo(c: &mut Cursor, load: &dyn Fn(&str) -> Result<PosetSpec>) -> Result<WpoTerm> {
    if c.peek() == Some('1') {
        c.pos += 1;
        return Ok(WpoTerm::Singleton);
    }
    let at = c.pos;
    let name = c.ident()?;
    if name == "Singleton" {
        return Ok(WpoTerm::Singleton);
    }
    c.expect('(')?;
    let t = match name {
        "Base" => {
            c.skip_ws();
            if c.eat('@') {
                let end = c.rest().find(')').ok_or_else(|| c.error("expected ')'"))?;
                let path = c.rest()[..end].trim().to_string();
                c.pos += end;
                WpoTerm::base(load(&path)?)
            } else {
                let at = c.pos;
                let kind = c.ident()?;
                let spec = if let Some(n) = kind.strip_prefix("antichain") {
                    n.parse().ok().map(PosetSpec::antichain)
                } else if let Some(n) = kind.strip_prefix("chain") {
                    n.parse().ok().map(PosetSpec::chain)
                } else {
                    None
                };
                WpoTerm::base(spec.ok_or_else(|| Error::parse(at, format!("unknown base order '{kind}'")))?)
            }
        }
        "H" => {
            let x = ord_sum(c)?;
            WpoTerm::H(x)
        }
        "Star" => WpoTerm::Star(Box::new(wpo(c, load)?)),
        "Pfin" => WpoTerm::Pfin(Box::new(wpo(c, load)?)),
        "PfinNE" => WpoTerm::PfinNE(Box::new(wpo(c, load)?)),
        "DisjointUnion" | "Product" | "LexProduct" | "OrderedSum" => {
            let mut items = Vec::new();
            if c.peek() != Some(')') {
                items.push(wpo(c, load)?);
                while c.eat(',') {
                    items.push(wpo(c, load)?);
                }
            }
            match name {
                "DisjointUnion" => WpoTerm::DisjointUnion(items),
                "Product" => WpoTerm::Product(items),
                "LexProduct" => WpoTerm::LexProduct(items),
                _ => WpoTerm::OrderedSum(items),
            }
        }
        _ => return Err(Error::parse(at, format!("unknown constructor '{name}'"))),
    };
    c.expect(')')?;
    Ok(t)
}

/// Parses an order term; `Base(@path)` is resolved through `load`.
pub fn parse_wpo_term_with(text: &str, load: &dyn Fn(&str) -> Result<PosetSpec>) -> Result<WpoTerm> {
    let mut c = Cursor::new(text);
    let t = wpo(&mut c, load)?;
    c.finish()?;
    t.validate()?;
    Ok(t)
}

/// Parses an order term without file references.
pub fn parse_wpo_term(text: &str) -> Result<WpoTerm> {
    parse_wpo_term_with(text, &|path| {
        Err(Error::Unsupported(format!("file reference @{path} needs a loader")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordinal_examples() {
        let x = parse_ordinal("w^w*2 + 1").unwrap();
        assert_eq!(x, Ordinal::term(Ordinal::omega(), 2u32).ord_add(&Ordinal::one()));
        assert_eq!(parse_ordinal("3 + w").unwrap(), Ordinal::omega());
        let s = "w^(w^2)*3 + w*2 + 5";
        assert_eq!(parse_ordinal(s).unwrap().to_string(), s);
        assert_eq!(parse_ordinal("ω^ω").unwrap(), Ordinal::omega_pow(Ordinal::omega()));
        assert_eq!(parse_ordinal("w^w^w").unwrap().to_string(), "w^(w^w)");
    }

    #[test]
    fn ordinal_errors_carry_positions() {
        match parse_ordinal("w + + 1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_ordinal("").is_err());
        assert!(parse_ordinal("w^").is_err());
        assert!(parse_ordinal("(w").is_err());
        assert!(parse_ordinal("w*w").is_err());
    }

    #[test]
    fn word_examples() {
        let p = PosetSpec::antichain(3);
        let w = parse_word("a b (c)^w", &p).unwrap();
        assert_eq!(
            w,
            WordTerm::Cat(vec![WordTerm::Lit(0), WordTerm::Lit(1), WordTerm::omega(WordTerm::Lit(2))])
        );
        let w = parse_word("((a b)^w)^w", &p).unwrap();
        assert_eq!(w.level(), 2);
        assert_eq!(w.length(), Ordinal::omega_pow(Ordinal::from(2)));
        assert!(matches!(parse_word("a ()^w", &p), Err(Error::Parse { .. })));
        assert!(parse_word("a z", &p).is_err());
        assert_eq!(parse_word("", &p).unwrap(), WordTerm::Eps);
        assert_eq!(parse_word("ε", &p).unwrap(), WordTerm::Eps);
        let text = "a b (c (a b)^w)^w";
        assert_eq!(parse_word(text, &p).unwrap().display(&p).to_string(), text);
    }

    #[test]
    fn auto_alphabet() {
        let (p, ws) = parse_words_auto(&["(x y)^w", "(y x)^w"]).unwrap();
        assert_eq!(p.names(), ["x", "y"]);
        assert_eq!(ws.len(), 2);
    }

    #[test]
    fn pk_text_form() {
        let p = PosetSpec::antichain(3);
        let e = parse_pk("{a, {b,c}}", &p).unwrap();
        assert_eq!(e.min_level(), 2);
        assert_eq!(e.display(&p).to_string(), "{a, {b, c}}");
        assert_eq!(parse_pow_list("{a} {a,b}", &p).unwrap().len(), 2);
    }

    #[test]
    fn wpo_terms() {
        for s in ["Pfin(H(w^w))", "Base(chain2)", "DisjointUnion(H(w), Singleton)", "Star(Base(antichain3))"] {
            assert_eq!(parse_wpo_term(s).unwrap().to_string(), s);
        }
        assert_eq!(parse_wpo_term("1").unwrap(), WpoTerm::Singleton);
        assert!(parse_wpo_term("H(0)").is_err());
        assert!(parse_wpo_term("Base(@x.json)").is_err());
        assert!(parse_wpo_term("Foo(1)").is_err());
    }
}
