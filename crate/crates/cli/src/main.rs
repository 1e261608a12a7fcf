use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use finseq::bounds::{self, Mode};
use finseq::canon::{decompose, decompose_eq, phi_list, phi_pair, Pk0Elem};
use finseq::lower::{extract_maximals, lowerbd_instance, psi, psi_star};
use finseq::syntax::{parse_ordinal, parse_pow, parse_pow_list, parse_word, parse_words_auto, parse_wpo_term_with};
use finseq::words::{canonical_omega, embeds_exact, find_embedding, is_indecomposable, WordTerm};
use finseq::wqo::{enumerate_elements, leq_h, o_eval, show_elem, HEmbedding, PosetSpec, WpoElem, WpoTerm};
use finseq::{selftest, Error, Ordinal};

#[derive(Parser)]
#[command(name = "finseq", version, about = "Order types of finite-image transfinite sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ordinal arithmetic below ε₀.
    Ord {
        op: OrdOp,
        a: String,
        b: Option<String>,
    },
    /// Upper and lower bounds on order types.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Word terms and the embedding order.
    #[command(subcommand)]
    Word(WordCmd),
    /// Order terms and their types.
    #[command(subcommand)]
    Wqo(WqoCmd),
    /// The lower-bound maps into words.
    #[command(subcommand)]
    Lower(LowerCmd),
    #[command(subcommand)]
    Demo(DemoCmd),
    /// Runs the randomized property sweeps.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrdOp {
    /// Canonical form of `a`.
    Canon,
    Cmp,
    /// Natural sum.
    NatAdd,
    /// Natural product.
    NatMul,
    Add,
    Mul,
    /// 2^a.
    TwoPow,
    /// -1 + a.
    MinusOnePlus,
    Succ,
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Every bound that applies to sequences of length below alpha over an
    /// order of type beta.
    Report {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        json: bool,
    },
    /// Type of the finite words over an order of type B.
    H { beta: String },
    Pq {
        #[arg(long)]
        k: usize,
        beta: String,
    },
    Fg {
        #[arg(long)]
        k: usize,
        beta: String,
    },
    UpperK {
        #[arg(long)]
        k: usize,
        beta: String,
    },
    UpperAlpha {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Sequences of length exactly alpha.
        #[arg(long)]
        eq: bool,
    },
    U { beta: String },
    Lower {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
}

#[derive(Args)]
struct PosetArg {
    /// Poset JSON; without it the letters form an antichain.
    #[arg(long)]
    poset: Option<String>,
}

#[derive(Subcommand)]
enum WordCmd {
    /// Decides whether S embeds in T; exit 1 when it does not.
    Embeds {
        s: String,
        t: String,
        #[command(flatten)]
        poset: PosetArg,
        /// Print an embedding witness.
        #[arg(long)]
        witness: bool,
    },
    /// Normal form, length and, for length ω, the canonical form.
    Canon {
        s: String,
        #[command(flatten)]
        poset: PosetArg,
    },
    /// Writes S as an image of the canonical map from iterated powersets.
    Decompose {
        s: String,
        #[arg(long)]
        k: usize,
        /// S has length exactly ω^(k-1) times a positive integer plus a tail.
        #[arg(long)]
        eq: bool,
        #[command(flatten)]
        poset: PosetArg,
    },
}

#[derive(Subcommand)]
enum WqoCmd {
    /// Maximal order type of an order term.
    Oeval { term: String },
    /// Checks the embedding H(B) -> H(B2) on sampled element pairs.
    Hembed {
        b: String,
        b2: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lists elements of an order term by increasing size.
    Enumerate {
        term: String,
        #[arg(long, default_value_t = 20)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum LowerCmd {
    /// ψ_k of one iterated powerset element, or ψ'_k of a list with --star.
    Psi {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        poset: String,
        #[arg(long)]
        input: String,
        #[arg(long)]
        star: bool,
    },
    /// The order witnessing the lower bound at B.
    Instance { beta: String },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Bounds for sequences of length ω+1 over two letters.
    Schmidt,
    /// Type of finite words, case by case.
    HigmanTable,
}

enum Outcome {
    True,
    False,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::True) => ExitCode::SUCCESS,
        Ok(Outcome::False) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Invalid(_) | Error::MalformedWitness(_) => 2,
        Error::Unsupported(_) => 3,
        Error::Invariant(_) => 4,
    }
}

fn ord(text: &str) -> finseq::Result<Ordinal> {
    parse_ordinal(text)
}

fn load_poset(path: &str) -> finseq::Result<PosetSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
    PosetSpec::from_json(path, &text)
}

fn words_in(poset: &PosetArg, texts: &[&str]) -> finseq::Result<(PosetSpec, Vec<WordTerm>)> {
    match &poset.poset {
        Some(path) => {
            let p = load_poset(path)?;
            let ws = texts.iter().map(|t| parse_word(t, &p)).collect::<finseq::Result<_>>()?;
            Ok((p, ws))
        }
        None => parse_words_auto(texts),
    }
}

fn run(cmd: Command) -> finseq::Result<Outcome> {
    match cmd {
        Command::Ord { op, a, b } => run_ord(op, &a, b.as_deref()),
        Command::Bound(c) => run_bound(c),
        Command::Word(c) => run_word(c),
        Command::Wqo(c) => run_wqo(c),
        Command::Lower(c) => run_lower(c),
        Command::Demo(DemoCmd::Schmidt) => demo_schmidt(),
        Command::Demo(DemoCmd::HigmanTable) => demo_higman(),
        Command::Selftest { seed } => {
            let mut ok = true;
            for r in selftest::run(seed) {
                let status = if r.ok() { "ok" } else { "FAILED" };
                println!("{:<10} {:>5} passed {:>3} failed  {status}", r.name, r.passed, r.failed);
                ok &= r.ok();
            }
            Ok(if ok { Outcome::True } else { Outcome::False })
        }
    }
}

fn run_ord(op: OrdOp, a: &str, b: Option<&str>) -> finseq::Result<Outcome> {
    let x = ord(a)?;
    let second = || -> finseq::Result<Ordinal> {
        ord(b.ok_or_else(|| Error::Invalid("this operation takes two operands".into()))?)
    };
    match op {
        OrdOp::Canon => println!("{x}"),
        OrdOp::Cmp => {
            let y = second()?;
            let sign = match x.cmp(&y) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            println!("{x} {sign} {y}");
        }
        OrdOp::NatAdd => println!("{}", x.nat_add(&second()?)),
        OrdOp::NatMul => println!("{}", x.nat_mul(&second()?)),
        OrdOp::Add => println!("{}", x.ord_add(&second()?)),
        OrdOp::Mul => println!("{}", x.ord_mul(&second()?)),
        OrdOp::TwoPow => println!("{}", x.checked_two_pow()?),
        OrdOp::MinusOnePlus => println!("{}", x.minus_one_plus()?),
        OrdOp::Succ => match x.successor_split() {
            (true, Some(p)) => println!("successor of {p}"),
            _ if x.is_zero() => println!("zero"),
            _ => println!("limit"),
        },
    }
    Ok(Outcome::True)
}

fn run_bound(c: BoundCmd) -> finseq::Result<Outcome> {
    match c {
        BoundCmd::Report { alpha, beta, json } => {
            let r = bounds::report(&ord(&alpha)?, &ord(&beta)?)?;
            if json {
                println!("{}", r.to_json());
            } else {
                println!("alpha          {}", r.alpha);
                println!("beta           {}", r.beta);
                println!("upper_finseq   {}", r.upper_finseq);
                if let Some(v) = &r.upper_finseqeq {
                    println!("upper_finseqeq {v}");
                }
                if let Some(v) = &r.upper_indec {
                    println!("upper_indec    {v}");
                }
                if let Some(v) = &r.lower_finseq {
                    println!("lower_finseq   {v}");
                }
                if let Some(v) = &r.lower_indec {
                    println!("lower_indec    {v}");
                }
                for (k, v) in &r.provenance {
                    println!("  {k}: {v}");
                }
            }
        }
        BoundCmd::H { beta } => println!("{}", bounds::h_fun(&ord(&beta)?)),
        BoundCmd::Pq { k, beta } => {
            let (p, q) = bounds::pq(k, &ord(&beta)?)?;
            println!("p = {p}");
            println!("q = {q}");
        }
        BoundCmd::Fg { k, beta } => {
            let r = bounds::fg(k, &ord(&beta)?)?;
            println!("f  = {}", r.f);
            println!("g  = {}", r.g);
            println!("f+ = {}", r.p_plus);
            println!("g+ = {}", r.g_plus);
        }
        BoundCmd::UpperK { k, beta } => {
            let r = bounds::upper_omega_k(k, &ord(&beta)?)?;
            println!("finseq   {}", r.finseq);
            println!("finseqeq {}", r.finseqeq);
            println!("indec    {}", r.indec);
        }
        BoundCmd::UpperAlpha { alpha, beta, eq } => {
            let mode = if eq { Mode::Finseqeq } else { Mode::Finseq };
            let (v, formula) = bounds::upper_alpha_detail(&ord(&alpha)?, &ord(&beta)?, mode)?;
            println!("{v}  ({})", formula.describe());
        }
        BoundCmd::U { beta } => println!("{}", bounds::u_fun(&ord(&beta)?)?),
        BoundCmd::Lower { alpha, beta } => {
            let r = bounds::lower_report(&ord(&alpha)?, &ord(&beta)?)?;
            let tag = if r.exact { "exact" } else { "lower bound" };
            println!("{}  ({tag})", r.value);
        }
    }
    Ok(Outcome::True)
}

fn run_word(c: WordCmd) -> finseq::Result<Outcome> {
    match c {
        WordCmd::Embeds { s, t, poset, witness } => {
            let (p, ws) = words_in(&poset, &[&s, &t])?;
            let verdict = embeds_exact(&p, &ws[0], &ws[1])?;
            println!("{verdict}");
            if verdict && witness {
                if let Some(w) = find_embedding(&p, &ws[0], &ws[1])? {
                    println!("{w:?}");
                }
            }
            Ok(if verdict { Outcome::True } else { Outcome::False })
        }
        WordCmd::Canon { s, poset } => {
            let (p, ws) = words_in(&poset, &[&s])?;
            let w = &ws[0];
            println!("term          {}", w.display(&p));
            println!("length        {}", w.length());
            println!("level         {}", w.level());
            if !matches!(w, WordTerm::Eps) {
                println!("indecomposable {}", is_indecomposable(&p, w)?);
            }
            if w.length() == Ordinal::omega() {
                let (prefix, tail) = canonical_omega(w)?;
                let names: Vec<&str> = tail.iter().map(|&x| p.name(x)).collect();
                println!("canonical     {} ({})^w", prefix.display(&p), names.join(" "));
            }
            Ok(Outcome::True)
        }
        WordCmd::Decompose { s, k, eq, poset } => {
            let (p, ws) = words_in(&poset, &[&s])?;
            let w = &ws[0];
            let show = |qs: &[finseq::canon::QkElem]| -> String {
                let parts: Vec<String> = qs.iter().map(|q| format!("{}", q.elem.display(&p))).collect();
                format!("[{}]", parts.join(", "))
            };
            if eq {
                let (list, last) = decompose_eq(w, k)?;
                println!("list  {}", show(&list));
                println!("final {}", last.display(&p));
                println!("image {}", phi_pair(k, &list, &Pk0Elem::Elem(last.clone()))?.display(&p));
            } else {
                let list = decompose(w, k)?;
                println!("list  {}", show(&list));
                println!("image {}", phi_list(k, &list)?.display(&p));
            }
            Ok(Outcome::True)
        }
    }
}

fn run_wqo(c: WqoCmd) -> finseq::Result<Outcome> {
    match c {
        WqoCmd::Oeval { term } => {
            let t = parse_wpo_term_with(&term, &load_poset)?;
            let o = o_eval(&t)?;
            println!("{}  ({})", o.value, o.exactness);
        }
        WqoCmd::Hembed { b, b2, samples, seed } => {
            let (from, to) = (ord(&b)?, ord(&b2)?);
            let f = HEmbedding::new(from.clone(), to.clone())?;
            let pool = enumerate_elements(&WpoTerm::H(from.clone()), 64)?.elements;
            let xs: Vec<_> = pool
                .into_iter()
                .filter_map(|e| match e {
                    WpoElem::H(h) => Some(h),
                    _ => None,
                })
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut bad = 0;
            for _ in 0..samples {
                let (Some(x), Some(y)) = (xs.choose(&mut rng), xs.choose(&mut rng)) else {
                    break;
                };
                if leq_h(&from, x, y)? != leq_h(&to, &f.apply(x)?, &f.apply(y)?)? {
                    bad += 1;
                    println!("mismatch: {x} vs {y}");
                }
            }
            println!("{samples} pairs, {bad} mismatches");
            if bad > 0 {
                return Err(Error::Invariant("the embedding does not preserve and reflect the order".into()));
            }
        }
        WqoCmd::Enumerate { term, budget } => {
            let t = parse_wpo_term_with(&term, &load_poset)?;
            let e = enumerate_elements(&t, budget)?;
            for x in &e.elements {
                println!("{}", show_elem(&t, x));
            }
            if e.short {
                println!("({} elements in total)", e.elements.len());
            }
        }
    }
    Ok(Outcome::True)
}

fn run_lower(c: LowerCmd) -> finseq::Result<Outcome> {
    match c {
        LowerCmd::Psi { k, poset, input, star } => {
            let ambient = WpoTerm::base(load_poset(&poset)?);
            let peel = if star { k } else { k.saturating_sub(1) };
            let d = extract_maximals(&ambient, peel)?;
            let a = d.alphabet()?;
            for (i, v) in a.separators.iter().enumerate() {
                println!("v{}    {}", i + 1, a.poset.name(*v));
            }
            let w = if star {
                psi_star(k, &d, &a, &parse_pow_list(&input, &a.poset)?)?
            } else {
                psi(k, &d, &a, &parse_pow(&input, &a.poset)?)?
            };
            println!("image {}", w.display(&a.poset));
        }
        LowerCmd::Instance { beta } => {
            let inst = lowerbd_instance(&ord(&beta)?)?;
            println!("order   {}", inst.x);
            println!("claimed {}", inst.claimed);
            if let Some(d) = &inst.decomposition {
                for v in &d.v {
                    println!("peeled  {} from {}", show_elem(&d.ambient, v), d.ambient);
                }
            }
        }
    }
    Ok(Outcome::True)
}

fn demo_schmidt() -> finseq::Result<Outcome> {
    let alpha = ord("w + 1")?;
    let beta = Ordinal::from(2u64);
    let (bound, formula) = bounds::upper_alpha_detail(&alpha, &beta, Mode::Finseq)?;
    let antichain = ord("w^w*3 + 1")?;
    let chain = ord("w^w*2 + 1")?;
    println!("sequences of length < w+1 over an order of type 2");
    println!("  over 1+1 (antichain)  {antichain}");
    println!("  over 2 (chain)        {chain}");
    println!("  upper bound           {bound}  ({})", formula.describe());
    if !(bound >= antichain && antichain >= chain) {
        return Err(Error::Invariant("the upper bound is below a known type".into()));
    }
    println!("  {bound} >= {antichain} >= {chain}");
    Ok(Outcome::True)
}

fn demo_higman() -> finseq::Result<Outcome> {
    println!("o(X)                 o(X*)");
    println!("0                    1");
    println!("n, finite, > 0       w^(w^(n-1))");
    println!("e + n, e epsilon     w^(w^(o(X)+1))   (not below e_0)");
    println!("otherwise            w^(w^o(X))");
    println!();
    for s in ["0", "1", "2", "3", "7", "w", "w + 1", "w^w", "w^w*2 + 1"] {
        let b = ord(s)?;
        println!("{:<20} {}", b.to_string(), bounds::h_fun(&b));
    }
    Ok(Outcome::True)
}
