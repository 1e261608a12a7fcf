//! Finite-image transfinite words as terms, and the embedding order on them.
//!
//! A word term is built from letters, concatenation and ω-powers. Positions
//! of a term are addressed by paths through the term tree: a child index at
//! each concatenation and a copy index at each ω-power.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::wqo::{Letter, PosetSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordTerm {
    Eps,
    Lit(Letter),
    Cat(Vec<WordTerm>),
    OmegaPow(Box<WordTerm>),
}

impl WordTerm {
    pub fn lit(x: Letter) -> Self {
        WordTerm::Lit(x)
    }

    /// Normalized concatenation.
    pub fn cat(parts: Vec<WordTerm>) -> Self {
        WordTerm::Cat(parts).normalize()
    }

    /// Normalized ω-power.
    pub fn omega(body: WordTerm) -> Self {
        WordTerm::OmegaPow(Box::new(body)).normalize()
    }

    /// Finite word from letters.
    pub fn from_letters(xs: &[Letter]) -> Self {
        WordTerm::cat(xs.iter().map(|&x| WordTerm::Lit(x)).collect())
    }

    /// Flattens concatenations, drops empty parts and unwraps singletons.
    pub fn normalize(&self) -> WordTerm {
        match self {
            WordTerm::Eps | WordTerm::Lit(_) => self.clone(),
            WordTerm::Cat(parts) => {
                let mut flat = Vec::new();
                for p in parts {
                    match p.normalize() {
                        WordTerm::Eps => {}
                        WordTerm::Cat(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                match flat.len() {
                    0 => WordTerm::Eps,
                    1 => flat.pop().expect("one part"),
                    _ => WordTerm::Cat(flat),
                }
            }
            WordTerm::OmegaPow(b) => match b.normalize() {
                WordTerm::Eps => WordTerm::Eps,
                body => WordTerm::OmegaPow(Box::new(body)),
            },
        }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }

    pub fn level(&self) -> usize {
        match self {
            WordTerm::Eps | WordTerm::Lit(_) => 0,
            WordTerm::Cat(ps) => ps.iter().map(WordTerm::level).max().unwrap_or(0),
            WordTerm::OmegaPow(b) => b.level() + 1,
        }
    }

    pub fn length(&self) -> Ordinal {
        match self {
            WordTerm::Eps => Ordinal::zero(),
            WordTerm::Lit(_) => Ordinal::one(),
            WordTerm::Cat(ps) => ps
                .iter()
                .fold(Ordinal::zero(), |acc, p| acc.ord_add(&p.length())),
            WordTerm::OmegaPow(b) => b.length().ord_mul(&Ordinal::omega()),
        }
    }

    pub fn image(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        self.collect_image(&mut out);
        out
    }

    fn collect_image(&self, out: &mut BTreeSet<Letter>) {
        match self {
            WordTerm::Eps => {}
            WordTerm::Lit(x) => {
                out.insert(*x);
            }
            WordTerm::Cat(ps) => ps.iter().for_each(|p| p.collect_image(out)),
            WordTerm::OmegaPow(b) => b.collect_image(out),
        }
    }

    /// Letters of a finite word, in order; `None` if the word is infinite.
    pub fn letters(&self) -> Option<Vec<Letter>> {
        match self {
            WordTerm::Eps => Some(Vec::new()),
            WordTerm::Lit(x) => Some(vec![*x]),
            WordTerm::Cat(ps) => {
                let mut out = Vec::new();
                for p in ps {
                    out.extend(p.letters()?);
                }
                Some(out)
            }
            WordTerm::OmegaPow(_) => None,
        }
    }

    /// Top-level blocks: the parts of a concatenation, or the term itself.
    pub fn blocks(&self) -> &[WordTerm] {
        match self {
            WordTerm::Eps => &[],
            WordTerm::Cat(ps) => ps,
            _ => std::slice::from_ref(self),
        }
    }

    /// Every ω-power replaced by `n` copies of its (unfolded) body.
    pub fn unfold(&self, n: usize) -> WordTerm {
        match self {
            WordTerm::Eps | WordTerm::Lit(_) => self.clone(),
            WordTerm::Cat(ps) => WordTerm::cat(ps.iter().map(|p| p.unfold(n)).collect()),
            WordTerm::OmegaPow(b) => {
                let body = b.unfold(n);
                WordTerm::cat(vec![body; n])
            }
        }
    }

    /// The nonempty tails of `self` that are expressible by cutting the term
    /// at a position.
    pub fn tails(&self) -> Vec<WordTerm> {
        match self {
            WordTerm::Eps => Vec::new(),
            WordTerm::Lit(_) => vec![self.clone()],
            WordTerm::Cat(ps) => {
                let mut out = Vec::new();
                for (i, p) in ps.iter().enumerate() {
                    for t in p.tails() {
                        let mut parts = vec![t];
                        parts.extend(ps[i + 1..].iter().cloned());
                        out.push(WordTerm::cat(parts));
                    }
                }
                out
            }
            WordTerm::OmegaPow(b) => b
                .tails()
                .into_iter()
                .map(|t| WordTerm::cat(vec![t, self.clone()]))
                .collect(),
        }
    }

    /// Renders with the element names of `alphabet`.
    pub fn display<'a>(&'a self, alphabet: &'a PosetSpec) -> impl fmt::Display + 'a {
        Shown { w: self, alphabet }
    }

    pub fn check_alphabet(&self, alphabet: &PosetSpec) -> Result<()> {
        match self.image().iter().find(|&&x| x >= alphabet.len()) {
            Some(x) => Err(Error::invalid(format!("letter {x} is outside the alphabet {alphabet}"))),
            None => Ok(()),
        }
    }
}

struct Shown<'a> {
    w: &'a WordTerm,
    alphabet: &'a PosetSpec,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(w: &WordTerm, p: &PosetSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match w {
                WordTerm::Eps => write!(f, "ε"),
                WordTerm::Lit(x) if *x < p.len() => write!(f, "{}", p.name(*x)),
                WordTerm::Lit(x) => write!(f, "#{x}"),
                WordTerm::Cat(ps) => {
                    for (i, q) in ps.iter().enumerate() {
                        if i > 0 {
                            write!(f, " ")?;
                        }
                        go(q, p, f)?;
                    }
                    Ok(())
                }
                WordTerm::OmegaPow(b) => {
                    write!(f, "(")?;
                    go(b, p, f)?;
                    write!(f, ")^w")
                }
            }
        }
        go(&self.w.normalize(), self.alphabet, f)
    }
}

/// Splits a word of length exactly ω into its finite prefix and the set of
/// letters occurring infinitely often.
pub fn canonical_omega(w: &WordTerm) -> Result<(WordTerm, BTreeSet<Letter>)> {
    let w = w.normalize();
    let blocks = w.blocks();
    let wrong = || Error::invalid("canonical_omega needs a word of length exactly w");
    let (last, prefix) = blocks.split_last().ok_or_else(wrong)?;
    let WordTerm::OmegaPow(body) = last else {
        return Err(wrong());
    };
    if body.level() != 0 || prefix.iter().any(|b| b.level() != 0) {
        return Err(wrong());
    }
    Ok((WordTerm::cat(prefix.to_vec()), body.image()))
}

/// The ω-power cycling through `set` in increasing order.
pub fn omega_of_set(set: &BTreeSet<Letter>) -> WordTerm {
    WordTerm::omega(WordTerm::cat(set.iter().map(|&x| WordTerm::Lit(x)).collect()))
}

fn check_inputs(p: &PosetSpec, s: &WordTerm, t: &WordTerm) -> Result<(WordTerm, WordTerm)> {
    s.check_alphabet(p)?;
    t.check_alphabet(p)?;
    Ok((s.normalize(), t.normalize()))
}

/// Decides whether `s` embeds in `t`, for terms of level at most 2 (lengths
/// below ω³).
pub fn embeds_exact(p: &PosetSpec, s: &WordTerm, t: &WordTerm) -> Result<bool> {
    let (s, t) = check_inputs(p, s, t)?;
    if s.level() > 2 || t.level() > 2 {
        return Err(Error::Unsupported(
            "exact embedding is decided only for words of length below w^3".into(),
        ));
    }
    Ok(decide(p, &s, &t))
}

/// `∃n. a ≤ b^n`.
fn power_le(p: &PosetSpec, a: &WordTerm, b: &WordTerm) -> bool {
    a.blocks().iter().all(|x| match x {
        WordTerm::Lit(x) => has_letter_above(p, *x, b),
        WordTerm::OmegaPow(inner) => bounded_in(p, inner, b).is_some(),
        _ => unreachable!("normalized block"),
    })
}

fn has_letter_above(p: &PosetSpec, x: Letter, w: &WordTerm) -> bool {
    match w {
        WordTerm::Eps => false,
        WordTerm::Lit(y) => p.leq(x, *y),
        WordTerm::Cat(ps) => ps.iter().any(|q| has_letter_above(p, x, q)),
        WordTerm::OmegaPow(b) => has_letter_above(p, x, b),
    }
}

/// Index of a top-level block `C^ω` of `b` with `∃n. a ≤ C^n`, i.e. one
/// that absorbs `a^ω` inside a single copy of `b`.
fn bounded_in(p: &PosetSpec, a: &WordTerm, b: &WordTerm) -> Option<usize> {
    b.blocks().iter().position(|c| match c {
        WordTerm::OmegaPow(cb) => power_le(p, a, cb),
        _ => false,
    })
}

/// Least cut state reachable after embedding block `x` from state `j`.
///
/// State `j` means the remaining target starts at block `j`; inside an
/// ω-power every later position is as good as its start.
fn step(p: &PosetSpec, x: &WordTerm, tb: &[WordTerm], j: usize) -> Option<usize> {
    for (l, y) in tb.iter().enumerate().skip(j) {
        match (x, y) {
            (WordTerm::Lit(a), WordTerm::Lit(b)) if p.leq(*a, *b) => return Some(l + 1),
            (WordTerm::Lit(a), WordTerm::OmegaPow(body)) if has_letter_above(p, *a, body) => {
                return Some(l)
            }
            (WordTerm::OmegaPow(a), WordTerm::OmegaPow(body)) if power_le(p, a, body) => {
                return Some(if bounded_in(p, a, body).is_some() { l } else { l + 1 });
            }
            _ => {}
        }
    }
    None
}

fn decide(p: &PosetSpec, s: &WordTerm, t: &WordTerm) -> bool {
    let tb = t.blocks();
    let mut state = 0;
    for x in s.blocks() {
        match step(p, x, tb, state) {
            Some(next) => state = next,
            None => return false,
        }
    }
    true
}

/// A path into a word term: child index at concatenations, copy index at
/// ω-powers.
pub type Address = Vec<u64>;

/// Finite certificate that one word term embeds in another.
///
/// The shape mirrors the source term. A `Periodic` witness for `A^ω` maps
/// copy `q < prologue.len()` by `prologue[q]`; copy
/// `prologue.len() + r·period.len() + i` is mapped by `period[i]` with the
/// copy index of `node` (an ω-power of the target) advanced by `r·shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingWitness {
    Empty,
    Letter(Address),
    Cat(Vec<EmbeddingWitness>),
    Periodic {
        prologue: Vec<EmbeddingWitness>,
        period: Vec<EmbeddingWitness>,
        node: Address,
        shift: u64,
    },
}

impl EmbeddingWitness {
    fn for_each_address(&self, f: &mut dyn FnMut(&Address)) {
        match self {
            EmbeddingWitness::Empty => {}
            EmbeddingWitness::Letter(a) => f(a),
            EmbeddingWitness::Cat(ws) => ws.iter().for_each(|w| w.for_each_address(f)),
            EmbeddingWitness::Periodic {
                prologue, period, node, ..
            } => {
                f(node);
                prologue.iter().chain(period).for_each(|w| w.for_each_address(f));
            }
        }
    }

    /// Copy of `self` with the copy index at depth `depth` advanced by `by`.
    fn shifted(&self, depth: usize, by: u64) -> Result<EmbeddingWitness> {
        let sh = |a: &Address| -> Result<Address> {
            let mut a = a.clone();
            let slot = a
                .get_mut(depth)
                .ok_or_else(|| Error::MalformedWitness("address too short to shift".into()))?;
            *slot = slot
                .checked_add(by)
                .ok_or_else(|| Error::MalformedWitness("copy index overflow".into()))?;
            Ok(a)
        };
        Ok(match self {
            EmbeddingWitness::Empty => EmbeddingWitness::Empty,
            EmbeddingWitness::Letter(a) => EmbeddingWitness::Letter(sh(a)?),
            EmbeddingWitness::Cat(ws) => {
                EmbeddingWitness::Cat(ws.iter().map(|w| w.shifted(depth, by)).collect::<Result<_>>()?)
            }
            EmbeddingWitness::Periodic {
                prologue,
                period,
                node,
                shift,
            } => EmbeddingWitness::Periodic {
                prologue: prologue.iter().map(|w| w.shifted(depth, by)).collect::<Result<_>>()?,
                period: period.iter().map(|w| w.shifted(depth, by)).collect::<Result<_>>()?,
                node: sh(node)?,
                shift: *shift,
            },
        })
    }
}

/// Identity embedding of `s` into itself.
pub fn identity_witness(s: &WordTerm) -> EmbeddingWitness {
    fn go(s: &WordTerm, at: Address) -> EmbeddingWitness {
        match s {
            WordTerm::Eps => EmbeddingWitness::Empty,
            WordTerm::Lit(_) => EmbeddingWitness::Letter(at),
            WordTerm::Cat(ps) => EmbeddingWitness::Cat(
                ps.iter()
                    .enumerate()
                    .map(|(i, q)| {
                        let mut a = at.clone();
                        a.push(i as u64);
                        go(q, a)
                    })
                    .collect(),
            ),
            WordTerm::OmegaPow(b) => {
                let mut first = at.clone();
                first.push(0);
                EmbeddingWitness::Periodic {
                    prologue: Vec::new(),
                    period: vec![go(b, first)],
                    node: at,
                    shift: 1,
                }
            }
        }
    }
    go(&s.normalize(), Vec::new())
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sup {
    At(Address),
    /// Just past every position below this node.
    EndOf(Address),
}

#[derive(Clone, Debug)]
struct Span {
    min: Address,
    sup: Sup,
}

fn before(sup: &Sup, m: &Address) -> bool {
    match sup {
        Sup::At(a) => a < m,
        Sup::EndOf(n) => !m.starts_with(n) && m > n,
    }
}

enum Resolved<'a> {
    Letter(Letter),
    Node(&'a WordTerm),
}

fn resolve<'a>(t: &'a WordTerm, addr: &[u64]) -> Result<Resolved<'a>> {
    let mut cur = t;
    for &c in addr {
        cur = match cur {
            WordTerm::Cat(ps) => ps
                .get(c as usize)
                .ok_or_else(|| Error::MalformedWitness(format!("child index {c} out of range")))?,
            WordTerm::OmegaPow(b) => b,
            _ => return Err(Error::MalformedWitness("address descends below a letter".into())),
        };
    }
    Ok(match cur {
        WordTerm::Lit(x) => Resolved::Letter(*x),
        other => Resolved::Node(other),
    })
}

/// Checks a certificate that `s` embeds in `t`. Valid at every level.
///
/// Returns `Ok(false)` when the witness is well formed but violates
/// monotonicity or a letter constraint.
pub fn witness_check(p: &PosetSpec, s: &WordTerm, t: &WordTerm, w: &EmbeddingWitness) -> Result<bool> {
    let (s, t) = check_inputs(p, s, t)?;
    if s == WordTerm::Eps {
        return match w {
            EmbeddingWitness::Empty => Ok(true),
            _ => Err(Error::MalformedWitness("the empty word needs the empty witness".into())),
        };
    }
    Ok(check(p, &s, &t, w)?.is_some())
}

fn check(p: &PosetSpec, s: &WordTerm, t: &WordTerm, w: &EmbeddingWitness) -> Result<Option<Span>> {
    match (s, w) {
        (WordTerm::Lit(a), EmbeddingWitness::Letter(addr)) => match resolve(t, addr)? {
            Resolved::Letter(b) if p.leq(*a, b) => Ok(Some(Span {
                min: addr.clone(),
                sup: Sup::At(addr.clone()),
            })),
            Resolved::Letter(_) => Ok(None),
            Resolved::Node(_) => Err(Error::MalformedWitness("address does not reach a letter".into())),
        },
        (WordTerm::Cat(ps), EmbeddingWitness::Cat(ws)) => {
            if ps.len() != ws.len() {
                return Err(Error::MalformedWitness("concatenation arity mismatch".into()));
            }
            let mut spans = Vec::new();
            for (q, w) in ps.iter().zip(ws) {
                match check(p, q, t, w)? {
                    Some(sp) => spans.push(sp),
                    None => return Ok(None),
                }
            }
            sequence(spans)
        }
        (
            WordTerm::OmegaPow(body),
            EmbeddingWitness::Periodic {
                prologue,
                period,
                node,
                shift,
            },
        ) => {
            if *shift == 0 || period.is_empty() {
                return Err(Error::MalformedWitness("a period must be nonempty with positive shift".into()));
            }
            match resolve(t, node)? {
                Resolved::Node(WordTerm::OmegaPow(_)) => {}
                _ => return Err(Error::MalformedWitness("periodic node is not an w-power".into())),
            }
            let mut bad = false;
            for w in period {
                w.for_each_address(&mut |a| bad |= !(a.starts_with(node) && a.len() > node.len()));
            }
            if bad {
                return Err(Error::MalformedWitness("period leaves its w-power node".into()));
            }
            let mut spans = Vec::new();
            for w in prologue.iter().chain(period) {
                match check(p, body, t, w)? {
                    Some(sp) => spans.push(sp),
                    None => return Ok(None),
                }
            }
            let next = period[0].shifted(node.len(), *shift)?;
            let Some(wrap) = check(p, body, t, &next)? else {
                return Ok(None);
            };
            if !before(&spans.last().expect("nonempty").sup, &wrap.min) {
                return Ok(None);
            }
            Ok(sequence(spans)?.map(|sp| Span {
                min: sp.min,
                sup: Sup::EndOf(node.clone()),
            }))
        }
        _ => Err(Error::MalformedWitness("witness shape does not match the source term".into())),
    }
}

fn sequence(spans: Vec<Span>) -> Result<Option<Span>> {
    for pair in spans.windows(2) {
        if !before(&pair[0].sup, &pair[1].min) {
            return Ok(None);
        }
    }
    let first = spans.first().ok_or_else(|| Error::MalformedWitness("empty concatenation".into()))?;
    let last = spans.last().expect("nonempty");
    Ok(Some(Span {
        min: first.min.clone(),
        sup: last.sup.clone(),
    }))
}

/// Builds an embedding witness by first-fit placement, or `None` if `s`
/// does not embed in `t`.
pub fn find_embedding(p: &PosetSpec, s: &WordTerm, t: &WordTerm) -> Result<Option<EmbeddingWitness>> {
    let (s, t) = check_inputs(p, s, t)?;
    if s == WordTerm::Eps {
        return Ok(Some(EmbeddingWitness::Empty));
    }
    let tb = t.blocks();
    let prefix = |l: usize| -> Address {
        if matches!(t, WordTerm::Cat(_)) {
            vec![l as u64]
        } else {
            Vec::new()
        }
    };
    let mut l = 0;
    let mut copy = 0u64;
    let mut out = Vec::new();
    for x in s.blocks() {
        let Some(next) = step(p, x, tb, l) else {
            return Ok(None);
        };
        // `step` picks the first usable block; place `x` there.
        let target = (l..tb.len())
            .find(|&k| step(p, x, &tb[k..=k], 0).is_some())
            .expect("step found a block");
        if target != l {
            copy = 0;
        }
        let at = prefix(target);
        match (x, &tb[target]) {
            (WordTerm::Lit(_), WordTerm::Lit(_)) => out.push(EmbeddingWitness::Letter(at)),
            (WordTerm::Lit(a), WordTerm::OmegaPow(body)) => {
                let mut base = at;
                base.push(copy);
                out.push(find_letter(p, *a, body, base).expect("letter present"));
                copy += 1;
            }
            (WordTerm::OmegaPow(a), WordTerm::OmegaPow(body)) => {
                if let Some(i) = bounded_in(p, a, body) {
                    let mut node = at;
                    node.push(copy);
                    if matches!(**body, WordTerm::Cat(_)) {
                        node.push(i as u64);
                    }
                    let WordTerm::OmegaPow(c) = &body.blocks()[i] else {
                        unreachable!("bounded block is an w-power")
                    };
                    out.push(periodic_into(p, a, c, node, 0));
                    copy += 1;
                } else {
                    out.push(periodic_into(p, a, body, at, copy));
                }
            }
            _ => unreachable!("step only matches compatible blocks"),
        }
        if next > target {
            copy = 0;
        }
        l = next;
    }
    Ok(Some(if out.len() == 1 {
        out.pop().expect("one")
    } else {
        EmbeddingWitness::Cat(out)
    }))
}

/// Address of some letter `≥ x` in `w`, below `base`, using copy 0 of every
/// ω-power.
fn find_letter(p: &PosetSpec, x: Letter, w: &WordTerm, base: Address) -> Option<EmbeddingWitness> {
    match w {
        WordTerm::Eps => None,
        WordTerm::Lit(y) => p.leq(x, *y).then_some(EmbeddingWitness::Letter(base)),
        WordTerm::Cat(ps) => ps.iter().enumerate().find_map(|(i, q)| {
            let mut a = base.clone();
            a.push(i as u64);
            find_letter(p, x, q, a)
        }),
        WordTerm::OmegaPow(b) => {
            let mut a = base;
            a.push(0);
            find_letter(p, x, b, a)
        }
    }
}

/// Witness for `a^ω` into the ω-power `b^ω` at `node`, starting at copy
/// `start`: block `i` of each copy of `a` goes to its own copy of `b`.
/// Requires `∃n. a ≤ b^n`.
fn periodic_into(p: &PosetSpec, a: &WordTerm, b: &WordTerm, node: Address, start: u64) -> EmbeddingWitness {
    let blocks = a.blocks();
    let mut parts = Vec::new();
    for (i, x) in blocks.iter().enumerate() {
        let mut base = node.clone();
        base.push(start + i as u64);
        parts.push(block_into_copy(p, x, b, base));
    }
    let witness = if parts.len() == 1 {
        parts.pop().expect("one")
    } else {
        EmbeddingWitness::Cat(parts)
    };
    EmbeddingWitness::Periodic {
        prologue: Vec::new(),
        period: vec![witness],
        node,
        shift: blocks.len() as u64,
    }
}

/// Witness for a single block `x` into one copy of `b` rooted at `base`.
fn block_into_copy(p: &PosetSpec, x: &WordTerm, b: &WordTerm, base: Address) -> EmbeddingWitness {
    match x {
        WordTerm::Lit(y) => find_letter(p, *y, b, base).expect("letter present"),
        WordTerm::OmegaPow(inner) => {
            let i = bounded_in(p, inner, b).expect("block absorbed by one copy");
            let mut node = base;
            if matches!(b, WordTerm::Cat(_)) {
                node.push(i as u64);
            }
            let WordTerm::OmegaPow(c) = &b.blocks()[i] else {
                unreachable!("bounded block is an w-power")
            };
            periodic_into(p, inner, c, node, 0)
        }
        _ => unreachable!("normalized block"),
    }
}

/// Greedy leftmost matching of finite words.
pub fn finite_embeds(p: &PosetSpec, s: &[Letter], t: &[Letter]) -> bool {
    let mut rest = t.iter();
    s.iter().all(|&a| rest.by_ref().any(|&b| p.leq(a, b)))
}

/// Necessary condition for `s ≤ t`: each truncation of `s` with every
/// ω-power cut to `m ≤ n` copies embeds in `t`.
///
/// A finite word of length `L` embeds in `t` iff it embeds in `t` with every
/// ω-power cut to `L` copies, so each check is a finite matching.
pub fn unfold_oracle(p: &PosetSpec, s: &WordTerm, t: &WordTerm, n: usize) -> Result<bool> {
    let (s, t) = check_inputs(p, s, t)?;
    for m in 1..=n.max(1) {
        let sm = s.unfold(m).letters().expect("unfolded word is finite");
        let tm = t.unfold(sm.len().max(1)).letters().expect("unfolded word is finite");
        if !finite_embeds(p, &sm, &tm) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `s` and `t` embed in each other.
pub fn equivalent(p: &PosetSpec, s: &WordTerm, t: &WordTerm) -> Result<bool> {
    Ok(embeds_exact(p, s, t)? && embeds_exact(p, t, s)?)
}

/// Whether `w` is equivalent to each of its term-expressible nonempty tails.
pub fn is_indecomposable(p: &PosetSpec, w: &WordTerm) -> Result<bool> {
    let w = w.normalize();
    for tail in w.tails() {
        if !equivalent(p, &w, &tail)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Letter = 0;
    const B: Letter = 1;
    const C: Letter = 2;

    fn l(x: Letter) -> WordTerm {
        WordTerm::Lit(x)
    }

    fn cat(ps: Vec<WordTerm>) -> WordTerm {
        WordTerm::Cat(ps)
    }

    fn om(b: WordTerm) -> WordTerm {
        WordTerm::OmegaPow(Box::new(b))
    }

    fn anti() -> PosetSpec {
        PosetSpec::antichain(3)
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(cat(vec![cat(vec![l(A), l(B)]), WordTerm::Eps]).normalize(), cat(vec![l(A), l(B)]));
        assert_eq!(cat(vec![l(A)]).normalize(), l(A));
        assert_eq!(om(cat(vec![l(A), WordTerm::Eps])).normalize(), om(l(A)));
        assert_eq!(om(WordTerm::Eps).normalize(), WordTerm::Eps);
    }

    #[test]
    fn length_and_image() {
        let w = Ordinal::omega();
        assert_eq!(l(A).length(), Ordinal::one());
        assert_eq!(cat(vec![l(A), om(l(B))]).length(), w);
        let x = om(cat(vec![om(l(A)), l(B)]));
        assert_eq!(x.length(), w.successor().ord_mul(&w));
        assert_eq!(x.length(), Ordinal::omega_pow(Ordinal::from(2)));
        assert!(WordTerm::Eps.image().is_empty());
        assert_eq!(om(cat(vec![l(A), l(B), l(A)])).image(), [A, B].into());
    }

    #[test]
    fn canonical_omega_examples() {
        let (pre, set) = canonical_omega(&cat(vec![l(A), l(B), om(l(C))])).unwrap();
        assert_eq!((pre, set), (cat(vec![l(A), l(B)]), [C].into()));
        let (pre, set) = canonical_omega(&om(cat(vec![l(A), l(B)]))).unwrap();
        assert_eq!((pre, set), (WordTerm::Eps, [A, B].into()));
        let w = cat(vec![l(A), om(cat(vec![l(B), l(B), l(C)]))]);
        let (pre, set) = canonical_omega(&w).unwrap();
        assert_eq!((pre.clone(), set.clone()), (l(A), [B, C].into()));
        let back = WordTerm::cat(vec![pre, omega_of_set(&set)]);
        assert!(equivalent(&anti(), &w, &back).unwrap());
        assert!(canonical_omega(&om(om(l(A)))).is_err());
        assert!(canonical_omega(&cat(vec![om(l(A)), l(B)])).is_err());
    }

    #[test]
    fn embedding_examples() {
        let p = anti();
        assert!(embeds_exact(&p, &om(cat(vec![l(A), l(B)])), &om(cat(vec![l(B), l(A)]))).unwrap());
        assert!(!embeds_exact(&p, &om(l(B)), &om(l(A))).unwrap());
        let s = om(cat(vec![om(l(A)), om(l(B))]));
        let t = om(cat(vec![om(l(B)), om(l(A))]));
        assert!(embeds_exact(&p, &s, &t).unwrap());
        assert!(embeds_exact(&p, &t, &s).unwrap());
        // a^ω b does not embed in b a^ω
        assert!(!embeds_exact(&p, &cat(vec![om(l(A)), l(B)]), &cat(vec![l(B), om(l(A))])).unwrap());
        // level three is refused
        assert!(matches!(
            embeds_exact(&p, &om(om(om(l(A)))), &om(l(A))),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn chain_letters() {
        let p = PosetSpec::chain(2);
        assert!(embeds_exact(&p, &om(l(A)), &cat(vec![l(A), om(l(B))])).unwrap());
        assert!(!embeds_exact(&p, &om(l(B)), &cat(vec![om(l(A)), l(B)])).unwrap());
    }

    #[test]
    fn witness_examples() {
        let p = anti();
        let s = om(l(A));
        assert!(witness_check(&p, &s, &s, &identity_witness(&s)).unwrap());

        let sa = om(l(A));
        let sab = om(cat(vec![l(A), l(B)]));
        let w = find_embedding(&p, &sa, &sab).unwrap().unwrap();
        assert!(witness_check(&p, &sa, &sab, &w).unwrap());

        let bad = EmbeddingWitness::Cat(vec![EmbeddingWitness::Letter(vec![1]), EmbeddingWitness::Letter(vec![0])]);
        let ab = cat(vec![l(A), l(A)]);
        assert!(!witness_check(&p, &ab, &ab, &bad).unwrap());

        // a period that does not move forward
        let stuck = EmbeddingWitness::Periodic {
            prologue: vec![],
            period: vec![EmbeddingWitness::Letter(vec![0])],
            node: vec![],
            shift: 1,
        };
        assert!(witness_check(&p, &s, &s, &stuck).unwrap());
        let stuck = EmbeddingWitness::Periodic {
            prologue: vec![],
            period: vec![EmbeddingWitness::Letter(vec![0]), EmbeddingWitness::Letter(vec![1])],
            node: vec![],
            shift: 1,
        };
        assert!(!witness_check(&p, &s, &s, &stuck).unwrap());
        let zero = EmbeddingWitness::Periodic {
            prologue: vec![],
            period: vec![EmbeddingWitness::Letter(vec![0])],
            node: vec![],
            shift: 0,
        };
        assert!(witness_check(&p, &s, &s, &zero).is_err());
    }

    #[test]
    fn unfold_examples() {
        let p = anti();
        assert!(unfold_oracle(&p, &om(l(A)), &om(l(A)), 3).unwrap());
        assert!(!unfold_oracle(&p, &om(cat(vec![l(A), l(B)])), &om(l(A)), 1).unwrap());
    }

    #[test]
    fn omega_powers_are_indecomposable() {
        let p = anti();
        for w in [
            om(l(A)),
            om(cat(vec![l(A), om(l(B))])),
            om(cat(vec![om(l(A)), l(C), om(cat(vec![l(B), l(A)]))])),
        ] {
            assert!(is_indecomposable(&p, &w).unwrap(), "{}", w.display(&p));
        }
        assert!(!is_indecomposable(&p, &cat(vec![l(A), om(l(B))])).unwrap());
    }
}
