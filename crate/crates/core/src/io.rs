//! Readers for the text and JSON input formats.
//!
//! JSON errors carry a path such as `$.of[1].members[3]`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::cst::{CstStep, CstTrace};
use crate::error::{Error, Result};
use crate::families::FiniteFamily;
use crate::jsets::IPGenerators;
use crate::rado::{Coloring, RationalMatrix};
use crate::symdyn::SymbolicWord;
use crate::windowsets::{finite_sums, Transform, WindowSet};

/// Largest window a set file may declare.
pub const MAX_WINDOW: usize = 1 << 24;

fn json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::parse("$", e.to_string()))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::parse(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::parse(path, format!("missing field {key:?}")))
}

fn only_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::parse(path, format!("unexpected field {k:?}"))),
        None => Ok(()),
    }
}

fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| Error::parse(path, "expected a nonnegative integer"))
}

fn usize_at(v: &Value, path: &str) -> Result<usize> {
    usize::try_from(uint(v, path)?).map_err(|_| Error::parse(path, "integer too large"))
}

fn int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::parse(path, "expected an integer"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))
}

fn usize_list(v: &Value, path: &str) -> Result<Vec<usize>> {
    array(v, path)?.iter().enumerate().map(|(i, x)| usize_at(x, &format!("{path}[{i}]"))).collect()
}

fn check_window(window: usize, path: &str) -> Result<usize> {
    if window > MAX_WINDOW {
        return Err(Error::Capacity { what: format!("window at {path}"), got: window as u128, limit: MAX_WINDOW as u128 });
    }
    Ok(window)
}

/// Evaluates a set spec bottom-up.
pub fn parse_set_spec(text: &str) -> Result<WindowSet> {
    set_from_value(&json(text)?, "$")
}

pub fn set_from_value(v: &Value, path: &str) -> Result<WindowSet> {
    let obj = object(v, path)?;
    let window = obj.get("window").map(|w| usize_at(w, &format!("{path}.window"))).transpose()?;
    if let Some(w) = window {
        check_window(w, &format!("{path}.window"))?;
    }
    let require_window = || window.ok_or_else(|| Error::parse(path, "missing field \"window\""));
    let lift = |e: Error, sub: &str| match e {
        Error::Argument(m) => Error::parse(format!("{path}{sub}"), m),
        other => other,
    };

    let set = if let Some(kind) = obj.get("type") {
        let kind = kind.as_str().ok_or_else(|| Error::parse(format!("{path}.type"), "expected a string"))?;
        let child = |key: &str| set_from_value(field(obj, key, path)?, &format!("{path}.{key}"));
        match kind {
            "union" | "intersect" => {
                only_keys(obj, &["window", "type", "of"], path)?;
                let parts = array(field(obj, "of", path)?, &format!("{path}.of"))?;
                let mut sets = parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| set_from_value(p, &format!("{path}.of[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                if sets.is_empty() {
                    return Err(Error::parse(format!("{path}.of"), "needs at least one set"));
                }
                let first = sets.remove(0);
                sets.iter().enumerate().try_fold(first, |acc, (i, s)| {
                    let out = if kind == "union" { acc.union(s) } else { acc.intersection(s) };
                    out.map_err(|e| lift(e, &format!(".of[{}]", i + 1)))
                })?
            }
            "complement" => {
                only_keys(obj, &["window", "type", "of"], path)?;
                child("of")?.complement()
            }
            "scale" | "divide" => {
                only_keys(obj, &["window", "type", "n", "of"], path)?;
                let n = usize_at(field(obj, "n", path)?, &format!("{path}.n"))?;
                let op = if kind == "scale" { Transform::Scale(n) } else { Transform::Divide(n) };
                child("of")?.transform(op).map_err(|e| lift(e, ".n"))?
            }
            "translate" => {
                only_keys(obj, &["window", "type", "t", "of"], path)?;
                let t = int(field(obj, "t", path)?, &format!("{path}.t"))?;
                child("of")?.transform(Transform::Translate(t)).map_err(|e| lift(e, ".t"))?
            }
            other => return Err(Error::parse(format!("{path}.type"), format!("unknown combinator {other:?}"))),
        }
    } else if let Some(members) = obj.get("members") {
        only_keys(obj, &["window", "members"], path)?;
        let members = usize_list(members, &format!("{path}.members"))?;
        WindowSet::from_members(require_window()?, members).map_err(|e| lift(e, ".members"))?
    } else if let Some(intervals) = obj.get("intervals") {
        only_keys(obj, &["window", "intervals"], path)?;
        let ipath = format!("{path}.intervals");
        let pairs = array(intervals, &ipath)?
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let p = usize_list(p, &format!("{ipath}[{i}]"))?;
                match p[..] {
                    [a, b] => Ok((a, b)),
                    _ => Err(Error::parse(format!("{ipath}[{i}]"), "expected [start, end]")),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        WindowSet::from_intervals(require_window()?, pairs).map_err(|e| lift(e, ".intervals"))?
    } else if let Some(generator) = obj.get("generator") {
        only_keys(obj, &["window", "generator"], path)?;
        generated(require_window()?, generator, &format!("{path}.generator"))?
    } else {
        return Err(Error::parse(path, "expected one of members, intervals, generator or type"));
    };

    match window {
        Some(w) if w != set.window() => Err(Error::parse(
            format!("{path}.window"),
            format!("declared window {w} but the operands have window {}", set.window()),
        )),
        _ => Ok(set),
    }
}

fn generated(window: usize, v: &Value, path: &str) -> Result<WindowSet> {
    let obj = object(v, path)?;
    let kind = field(obj, "type", path)?.as_str().ok_or_else(|| Error::parse(format!("{path}.type"), "expected a string"))?;
    let lift = |e: Error| match e {
        Error::Argument(m) => Error::parse(path, m),
        other => other,
    };
    match kind {
        "full" => {
            only_keys(obj, &["type"], path)?;
            Ok(WindowSet::full(window))
        }
        "fs" => {
            only_keys(obj, &["type", "xs"], path)?;
            let xs = usize_list(field(obj, "xs", path)?, &format!("{path}.xs"))?;
            finite_sums(&xs, window).map_err(lift)
        }
        "ap" => {
            only_keys(obj, &["type", "start", "step"], path)?;
            let start = usize_at(field(obj, "start", path)?, &format!("{path}.start"))?;
            let step = usize_at(field(obj, "step", path)?, &format!("{path}.step"))?;
            WindowSet::progression(window, start, step).map_err(lift)
        }
        "random" => {
            only_keys(obj, &["type", "seed", "density"], path)?;
            let seed = uint(field(obj, "seed", path)?, &format!("{path}.seed"))?;
            let density = match obj.get("density") {
                Some(d) => d
                    .as_f64()
                    .filter(|p| (0.0..=1.0).contains(p))
                    .ok_or_else(|| Error::parse(format!("{path}.density"), "expected a number in [0, 1]"))?,
                None => 0.5,
            };
            Ok(random_set(window, seed, density))
        }
        other => Err(Error::parse(format!("{path}.type"), format!("unknown generator {other:?}"))),
    }
}

/// Each position joins independently with probability `density`.
pub fn random_set(window: usize, seed: u64, density: f64) -> WindowSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = WindowSet::empty(window);
    for m in 1..=window {
        if rng.gen_bool(density) {
            out.insert(m);
        }
    }
    out
}

/// `{"universe": n, "generators": [[..], ..]}`.
pub fn parse_family(text: &str) -> Result<FiniteFamily> {
    let v = json(text)?;
    let obj = object(&v, "$")?;
    only_keys(obj, &["universe", "generators"], "$")?;
    let universe = usize_at(field(obj, "universe", "$")?, "$.universe")?;
    let gens = array(field(obj, "generators", "$")?, "$.generators")?
        .iter()
        .enumerate()
        .map(|(i, g)| usize_list(g, &format!("$.generators[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    FiniteFamily::from_sets(universe, &gens).map_err(|e| match e {
        Error::Argument(m) => Error::parse("$.generators", m),
        other => other,
    })
}

fn rational(token: &str, path: &str) -> Result<BigRational> {
    let bad = || Error::parse(path, format!("expected an integer or a/b, found {token:?}"));
    let (num, den) = match token.split_once('/') {
        Some((a, b)) => (a.parse::<BigInt>().map_err(|_| bad())?, b.parse::<BigInt>().map_err(|_| bad())?),
        None => (token.parse::<BigInt>().map_err(|_| bad())?, BigInt::from(1)),
    };
    if den.is_zero() {
        return Err(Error::parse(path, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// First line `p q`, then `p` rows of `q` tokens.
pub fn parse_matrix(text: &str) -> Result<RationalMatrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse("line 1", "empty matrix file"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [p, q] = dims[..] else {
        return Err(Error::parse(format!("line {}", hl + 1), "expected \"p q\""));
    };
    let parse_dim = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(format!("line {}", hl + 1), format!("bad dimension {s:?}")));
    let (p, q) = (parse_dim(p)?, parse_dim(q)?);
    let mut rows = Vec::with_capacity(p);
    for (ln, line) in lines.by_ref().take(p) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != q {
            return Err(Error::parse(format!("line {}", ln + 1), format!("expected {q} entries, found {}", toks.len())));
        }
        rows.push(
            toks.iter()
                .enumerate()
                .map(|(j, t)| rational(t, &format!("line {}, entry {}", ln + 1, j + 1)))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if rows.len() != p {
        return Err(Error::parse("eof", format!("expected {p} rows, found {}", rows.len())));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(format!("line {}", ln + 1), "trailing content after the matrix"));
    }
    RationalMatrix::new(rows).map_err(|e| match e {
        Error::Argument(m) => Error::parse("$", m),
        other => other,
    })
}

/// A parsed coloring and the labels of its colors when they were not numeric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringFile {
    pub coloring: Coloring,
    pub labels: Option<Vec<String>>,
}

/// One line of space-separated color ids. Numeric ids are used as is;
/// other labels are numbered by first appearance. A single token with no
/// digits, such as `RRBB`, is read one character per position.
pub fn parse_coloring(text: &str) -> Result<ColoringFile> {
    let body: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let [line] = body[..] else {
        return Err(Error::parse("$", format!("expected one line, found {}", body.len())));
    };
    let mut toks: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
    if toks.len() == 1 && !toks[0].chars().any(|c| c.is_ascii_digit()) {
        toks = toks[0].chars().map(String::from).collect();
    }
    let numeric: Option<Vec<u32>> = toks.iter().map(|t| t.parse().ok()).collect();
    let (colors, labels) = match numeric {
        Some(c) => (c, None),
        None => {
            let mut labels: Vec<String> = Vec::new();
            let colors = toks
                .iter()
                .map(|t| match labels.iter().position(|l| l == t) {
                    Some(i) => i as u32,
                    None => {
                        labels.push(t.clone());
                        (labels.len() - 1) as u32
                    }
                })
                .collect();
            (colors, Some(labels))
        }
    };
    let coloring = Coloring::new(colors).map_err(|e| match e {
        Error::Argument(m) => Error::parse("$", m),
        other => other,
    })?;
    Ok(ColoringFile { coloring, labels })
}

pub fn parse_word(text: &str) -> Result<SymbolicWord> {
    SymbolicWord::parse(text)
}

fn big(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::parse(path, "expected an integer")),
        Value::String(s) => s.trim().parse().map_err(|_| Error::parse(path, format!("not an integer: {s:?}"))),
        _ => Err(Error::parse(path, "expected an integer or an integer string")),
    }
}

/// `{"m": 2, "gens": [[1, 2], [3, 4]]}`; entries may be strings for large values.
pub fn parse_generators(text: &str) -> Result<IPGenerators> {
    let v = json(text)?;
    let obj = object(&v, "$")?;
    only_keys(obj, &["m", "gens"], "$")?;
    let m = usize_at(field(obj, "m", "$")?, "$.m")?;
    let gens = array(field(obj, "gens", "$")?, "$.gens")?
        .iter()
        .enumerate()
        .map(|(t, g)| {
            let p = format!("$.gens[{t}]");
            let row = array(g, &p)?;
            if row.len() != m {
                return Err(Error::parse(&p, format!("expected {m} coordinates, found {}", row.len())));
            }
            row.iter().enumerate().map(|(i, x)| big(x, &format!("{p}[{i}]"))).collect()
        })
        .collect::<Result<Vec<Vec<BigInt>>>>()?;
    IPGenerators::new(m, gens).map_err(|e| match e {
        Error::Argument(msg) => Error::parse("$", msg),
        other => other,
    })
}

/// Chain sets plus the link table `(n, r) ↦ m`.
pub type ChainCertificate = (Vec<WindowSet>, BTreeMap<(usize, usize), usize>);

/// `{"chain": [set-spec, ..], "links": [{"n": .., "r": .., "m": ..}, ..]}`.
pub fn parse_chain(text: &str) -> Result<ChainCertificate> {
    let v = json(text)?;
    let obj = object(&v, "$")?;
    only_keys(obj, &["chain", "links"], "$")?;
    let chain = array(field(obj, "chain", "$")?, "$.chain")?
        .iter()
        .enumerate()
        .map(|(i, s)| set_from_value(s, &format!("$.chain[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let mut links = BTreeMap::new();
    for (i, l) in array(field(obj, "links", "$")?, "$.links")?.iter().enumerate() {
        let p = format!("$.links[{i}]");
        let o = object(l, &p)?;
        only_keys(o, &["n", "r", "m"], &p)?;
        let get = |k: &str| usize_at(field(o, k, &p)?, &format!("{p}.{k}"));
        if links.insert((get("n")?, get("r")?), get("m")?).is_some() {
            return Err(Error::parse(&p, "duplicate link"));
        }
    }
    Ok((chain, links))
}

/// Reads the `steps` array of a trace, either at the top level or under
/// `witness` as in a `cst run` report; other fields are ignored.
pub fn parse_trace(text: &str) -> Result<CstTrace> {
    let v = json(text)?;
    let mut obj = object(&v, "$")?;
    let mut base = "$".to_string();
    if !obj.contains_key("steps") {
        if let Some(w) = obj.get("witness") {
            base = "$.witness".into();
            obj = object(w, &base)?;
        }
    }
    let steps = array(field(obj, "steps", &base)?, &format!("{base}.steps"))?
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = format!("{base}.steps[{i}]");
            let o = object(s, &p)?;
            only_keys(o, &["r", "alpha", "depth"], &p)?;
            Ok(CstStep {
                r: usize_at(field(o, "r", &p)?, &format!("{p}.r"))?,
                alpha: usize_list(field(o, "alpha", &p)?, &format!("{p}.alpha"))?,
                depth: usize_at(field(o, "depth", &p)?, &format!("{p}.depth"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CstTrace { steps })
}
