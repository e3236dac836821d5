//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/common/oracles.rs"]
mod oracles;

#[path = "../src/check.rs"]
#[allow(dead_code)]
mod check;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use csets_core::{
    columns_condition, cst_trace, entering_times, hj_check, indicator_word, j_witness, monochromatic_solution,
    partition_reduction, vdw_witness, verify_certificate, verify_cst, BigInt, BigRational, Coloring, Companion,
    CstOutcome, CstTrace, Cylinder, Engine, FilterVerdict, FiniteFamily, IPGenerators, JWitness, RamseyVerdict,
    RationalMatrix, Transform, WindowSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ip(g: &[Vec<i64>]) -> IPGenerators {
    let rows: Vec<&[i64]> = g.iter().map(|r| r.as_slice()).collect();
    IPGenerators::from_i64(&rows).unwrap()
}

fn random_set(rng: &mut ChaCha8Rng, window: usize, density: f64) -> WindowSet {
    WindowSet::from_members(window, (1..=window).filter(|_| rng.gen_bool(density))).unwrap()
}

fn random_gens(rng: &mut ChaCha8Rng, k: usize, m: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..k).map(|_| (0..m).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-3i64..=3);
    let den = if rng.gen_bool(0.3) { rng.gen_range(1i64..=3) } else { 1 };
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<BigRational>> {
    let q = rng.gen_range(2..=5);
    let p = rng.gen_range(1..=2);
    let mut rows: Vec<Vec<BigRational>> = (0..p).map(|_| (0..q).map(|_| rational(rng)).collect()).collect();
    // half the corpus gets a zero-sum column block so both verdicts occur
    if rng.gen_bool(0.5) {
        let last = rng.gen_range(1..q);
        for row in rows.iter_mut() {
            let s: BigRational = row[..last].iter().cloned().sum();
            row[last] = -s;
        }
    }
    rows
}

fn rado_decider() -> Outcome {
    let fixed: [(&[i64], bool); 3] = [(&[1, 1, -1], true), (&[1, -2, 1], true), (&[1, 1, -3], false)];
    for (row, want) in fixed {
        let a = RationalMatrix::from_integers(&[row]).unwrap();
        let cert = columns_condition(&a).unwrap();
        ensure(cert.is_some() == want, || format!("{row:?}: expected regular = {want}"))?;
        if let Some(c) = cert {
            ensure(verify_certificate(&a, &c).unwrap(), || format!("{row:?}: certificate rejected"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut some = 0;
    for i in 0..200 {
        let rows = random_matrix(&mut rng);
        let a = RationalMatrix::new(rows.clone()).unwrap();
        let got = columns_condition(&a).unwrap();
        let want = oracles::columns_condition_oracle(&rows);
        ensure(got.is_some() == want, || format!("matrix {i} {a}: decider {} oracle {want}", got.is_some()))?;
        if let Some(c) = got {
            some += 1;
            ensure(verify_certificate(&a, &c).unwrap(), || format!("matrix {i}: certificate rejected"))?;
        }
    }
    Ok(format!("3 fixed + 200 random matrices agree with the oracle ({some} regular)"))
}

fn schur() -> Outcome {
    let a = RationalMatrix::from_integers(&[&[1, 1, -1]]).unwrap();
    for index in 0..32 {
        let c = Coloring::nth(5, 2, index);
        let (color, x) =
            monochromatic_solution(&a, &c, false).ok_or_else(|| format!("coloring {:?} has no solution", c.colors()))?;
        ensure(check::mono_solution(&a, &c, color, &x, false), || format!("bad witness {x:?}"))?;
    }
    let split = Coloring::new(vec![0, 1, 1, 0]).unwrap();
    ensure(monochromatic_solution(&a, &split, false).is_none(), || "{1,4 | 2,3} has a solution".into())?;
    Ok("32/32 colorings of [1..5] solved, {1,4 | 2,3} avoids x+y=z".into())
}

fn van_der_waerden() -> Outcome {
    for index in 0..512 {
        let c = Coloring::nth(9, 2, index);
        let p = vdw_witness(&c, 3).unwrap().ok_or_else(|| format!("{:?} has no 3-AP", c.colors()))?;
        ensure(check::progression(&c, &p, 3), || format!("bad progression {p:?}"))?;
    }
    let mut avoiders = 0;
    for index in 0..256 {
        let c = Coloring::nth(8, 2, index);
        let got = vdw_witness(&c, 3).unwrap();
        ensure(got.is_some() == oracles::has_mono_ap(c.colors(), 3), || format!("disagree on {:?}", c.colors()))?;
        avoiders += got.is_none() as usize;
    }
    let rrbb = Coloring::new(vec![0, 0, 1, 1, 0, 0, 1, 1]).unwrap();
    ensure(vdw_witness(&rrbb, 3).unwrap().is_none(), || "RRBBRRBB has a 3-AP".into())?;
    Ok(format!("512/512 colorings of [1..9] hit, {avoiders} colorings of [1..8] avoid (RRBBRRBB among them)"))
}

fn hales_jewett() -> Outcome {
    let yes = hj_check(2, 2, 2).unwrap();
    ensure(yes.holds && yes.colorings_checked == 16, || format!("hj(2,2,2) = {yes:?}"))?;
    let no = hj_check(2, 2, 1).unwrap();
    ensure(!no.holds, || "hj(2,2,1) holds".into())?;
    Ok(format!("hj(2,2,2) true over 16 colorings, hj(2,2,1) false with {:?}", no.counterexample))
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let one = Cylinder::parse("1").unwrap();
    for i in 0..1000 {
        let n = rng.gen_range(1..=4096);
        let density = rng.gen_range(0.0..1.0);
        let f = random_set(&mut rng, n, density);
        let back = entering_times(&indicator_word(&f), &one).unwrap();
        ensure(back == f, || format!("instance {i} (N = {n}) differs"))?;
    }
    Ok("1000 random sets, N <= 4096".into())
}

fn j_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut some, mut none) = (0, 0);
    for i in 0..500 {
        let n = rng.gen_range(1..=80);
        let density = rng.gen_range(0.05..0.9);
        let f = random_set(&mut rng, n, density);
        let (k, m) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        let raw = random_gens(&mut rng, k, m, 30);
        let g = ip(&raw);
        let got = j_witness(&f, &g).unwrap();
        let want = oracles::j_witness_oracle(&f, &raw);
        ensure(got.as_ref().map(|w| (w.alpha.clone(), w.r)) == want, || format!("instance {i}: {got:?} vs {want:?}"))?;
        match got {
            Some(w) => {
                some += 1;
                ensure(w.verify(&f, &g).unwrap().ok, || format!("instance {i}: witness fails"))?;
            }
            None => none += 1,
        }
    }
    Ok(format!("500 instances agree ({some} witnesses, {none} none)"))
}

fn reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let n = rng.gen_range(500..=900);
        let evens = WindowSet::progression(n, 2, 2).unwrap();
        let odds = evens.complement();
        let (f1, f2) = if rng.gen_bool(0.5) { (evens, odds) } else { (odds, evens) };
        let k = rng.gen_range(2..=6);
        let raw: Vec<Vec<i64>> = random_gens(&mut rng, k, 2, 10).into_iter().map(|r| r.into_iter().map(|v| 2 * v).collect()).collect();
        let g = ip(&raw);
        let red = partition_reduction(&f1, &f2, &g, 2)
            .map_err(|e| format!("instance {i}: {e}"))?
            .ok_or_else(|| format!("instance {i}: no witness"))?;
        let cell = if red.index == 1 { &f1 } else { &f2 };
        let w = &red.witness;
        let direct = g.value(&w.alpha).unwrap().iter().all(|v| {
            let x: BigInt = v + BigInt::from(w.r);
            x > BigInt::from(0) && x <= BigInt::from(n) && cell.contains(x.try_into().unwrap())
        });
        ensure(direct, || format!("instance {i}: witness {w:?} leaves cell {}", red.index))?;
        ensure(w.r > w.alpha.len(), || format!("instance {i}: r = {} <= |alpha| = {}", w.r, w.alpha.len()))?;
    }
    Ok("100 instances, every witness inside its cell with r > |alpha|".into())
}

fn families() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    while done < 200 {
        let n = rng.gen_range(1..=5);
        let full = (1u32 << n) - 1;
        let gens: Vec<u32> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=full)).collect();
        let fam = FiniteFamily::upward_closure(n, &gens).unwrap();
        if !fam.is_proper() {
            continue;
        }
        done += 1;
        let table = oracles::closure_table(n, &gens);
        let dual = fam.dual().unwrap();
        let dual_table = oracles::dual_table(n, &table);
        for s in 0..=full {
            ensure(fam.contains(s) == table[s as usize], || format!("closure of {gens:?} at {s:b}"))?;
            ensure(dual.contains(s) == dual_table[s as usize], || format!("dual of {gens:?} at {s:b}"))?;
        }
        ensure(dual.dual().unwrap() == fam, || format!("dual(dual) != F for {gens:?}"))?;
        let ramsey = matches!(fam.ramsey_check().unwrap(), RamseyVerdict::Ramsey);
        let filter = matches!(dual.is_filter().unwrap(), FilterVerdict::Filter);
        ensure(ramsey == filter, || format!("ramsey {ramsey} vs dual filter {filter} for {gens:?}"))?;
        ensure(ramsey == oracles::is_ramsey_oracle(n, &table), || format!("ramsey oracle for {gens:?}"))?;
        ensure(filter == oracles::is_filter_oracle(n, &dual_table), || format!("filter oracle for {gens:?}"))?;
    }
    Ok("200 proper families, n <= 5, checked over every subset".into())
}

fn closures() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut scaled, mut blocked, mut tries) = (0, 0, 0);
    while (scaled < 100 || blocked < 100) && tries < 10_000 {
        tries += 1;
        let (k, m, n) = (rng.gen_range(1..=3), rng.gen_range(1..=2), rng.gen_range(10..=60));
        let raw = random_gens(&mut rng, k, m, 6);
        let g = ip(&raw);
        let f = random_set(&mut rng, n, 0.6);
        if let Some(w) = j_witness(&f, &g).unwrap() {
            let n = rng.gen_range(2..=4usize);
            let nf = f.rewindow(f.window() * n).transform(Transform::Scale(n)).unwrap();
            let lifted = JWitness { r: w.r * n, alpha: w.alpha.clone() };
            ensure(lifted.verify(&nf, &g.scaled(n as i64)).unwrap().ok, || format!("scale {n} of {w:?}"))?;
            scaled += 1;
        }

        // a target containing a shifted copy of the base's prefix
        let base = random_set(&mut rng, 12, 0.6);
        let k = rng.gen_range(6..=12);
        let shift = rng.gen_range(0..=40);
        let mut target = random_set(&mut rng, 120, 0.3);
        for b in base.iter().take_while(|&b| b <= k) {
            target.insert(b + shift);
        }
        let shifts = target.block_witness(&base, k).unwrap().ok_or("planted copy not found")?;
        ensure(check::block_shifts(&target, &base, &shifts), || format!("shifts {shifts:?} fail"))?;
        if let Some(w) = j_witness(&base.truncate(k), &g).unwrap() {
            let moved = JWitness { r: w.r + shifts[k - 1], alpha: w.alpha };
            ensure(moved.verify(&target, &g).unwrap().ok, || format!("block shift of {moved:?}"))?;
            blocked += 1;
        }
    }
    ensure(scaled >= 100 && blocked >= 100, || format!("only {scaled} scale and {blocked} block instances"))?;
    Ok(format!("{scaled} scale and {blocked} block constructions re-verify"))
}

fn cst_instance(rng: &mut ChaCha8Rng, i: usize) -> (WindowSet, IPGenerators, usize) {
    let rounds = rng.gen_range(2..=3);
    let m = rng.gen_range(1..=2);
    let k = rng.gen_range(rounds + 1..=rounds + 3);
    let step = if i.is_multiple_of(2) { 2 } else { rng.gen_range(1..=4) };
    let f = WindowSet::progression(1500, step, step).unwrap();
    let raw: Vec<Vec<i64>> = random_gens(rng, k, m, 5).into_iter().map(|r| r.into_iter().map(|v| v * step as i64).collect()).collect();
    (f, ip(&raw), rounds)
}

/// Violations expected after corruption, recomputed from scratch.
fn expected_violations(f: &WindowSet, g: &IPGenerators, t: &CstTrace) -> BTreeSet<(Vec<usize>, usize)> {
    let d = t.rounds();
    let mut out = BTreeSet::new();
    for beta in 1u32..1 << d {
        let rounds: Vec<usize> = (0..d).filter(|n| beta >> n & 1 == 1).collect();
        let r: i64 = rounds.iter().map(|&n| t.steps[n].r as i64).sum();
        let alpha: Vec<usize> = rounds.iter().flat_map(|&n| t.steps[n].alpha.clone()).collect();
        for i in 0..g.dim() {
            let s: BigInt = alpha.iter().map(|&a| g.generator(a)[i].clone()).sum();
            let v: i64 = (s + r).try_into().unwrap();
            if !f.contains_i64(v) {
                out.insert((rounds.iter().map(|n| n + 1).collect(), i + 1));
            }
        }
    }
    out
}

fn cst_loop() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut some, mut corrupted, mut i) = (0, 0, 0);
    while some < 50 && i < 2000 {
        let (f, g, rounds) = cst_instance(&mut rng, i);
        i += 1;
        let x = indicator_word(&f);
        let Ok(CstOutcome::Trace(t)) = cst_trace(&x, &Companion::self_word(&x).unwrap(), &g, rounds, Engine::Greedy) else {
            continue;
        };
        some += 1;
        let v = verify_cst(&f, &g, &t).unwrap();
        ensure(v.ok, || format!("trace {t:?} rejected: {v:?}"))?;
        ensure(v.checked_beta_count == (1 << rounds) - 1 && v.components == g.dim(), || format!("coverage {v:?}"))?;

        for n in 0..rounds {
            let mut bad = t.clone();
            bad.steps[n].r += 1;
            let v = verify_cst(&f, &g, &bad).unwrap();
            let got: BTreeSet<(Vec<usize>, usize)> =
                v.membership_violations.iter().map(|x| (x.beta.clone(), x.component)).collect();
            let want = expected_violations(&f, &g, &bad);
            ensure(got == want, || format!("corrupted round {}: reported {got:?}, expected {want:?}", n + 1))?;
            ensure(v.ok == want.is_empty(), || "verdict does not match the violations".into())?;
            if !want.is_empty() {
                corrupted += 1;
            }
        }
    }
    ensure(some >= 50, || format!("only {some} traces found in {i} instances"))?;
    Ok(format!("{some} traces verified, {corrupted} corruptions reported exactly"))
}

const FIXTURE_RUNS: &[&[&str]] = &[
    &["detect", "mixed.json", "--run", "11", "--gap", "0", "--block-base", "base.json", "--block-depth", "3"],
    &["detect", "scaled.json"],
    &["family", "dual", "family.json"],
    &["family", "filter", "family.json"],
    &["family", "ramsey", "principal.json"],
    &["rado", "check", "schur.mat"],
    &["rado", "check", "no_rado.mat"],
    &["rado", "solve", "schur.mat", "--coloring", "schur4.txt"],
    &["rado", "solve", "ap3.mat", "--bound", "9", "--nontrivial"],
    &["rado", "inset", "schur.mat", "evens.json"],
    &["vdw", "--coloring", "rrbb.txt", "--k", "3"],
    &["vdw", "--coloring", "nine.txt", "--k", "3"],
    &["hindman", "--coloring", "nine.txt", "--k", "2"],
    &["jset", "witness", "evens.json", "gens.json"],
    &["jset", "reduce", "evens.json", "odds.json", "gens_even.json"],
    &["sym", "enter", "word.txt", "--cylinder", "101"],
    &["sym", "enter", "mixed.json", "--cylinder", "1", "--from-set"],
    &["sym", "prox", "word.txt", "word.txt", "--depth", "2"],
    &["sym", "chain", "chain.json"],
    &["sym", "chain", "chain_bad.json"],
    &["cst", "run", "evens400.json", "gens.json", "--rounds", "3"],
    &["cst", "run", "evens400.json", "gens.json", "--rounds", "3", "--y", "auto", "--backtrack", "500"],
    &["cst", "verify", "evens400.json", "gens.json", "trace.json"],
    &["cst", "verify", "evens400.json", "gens.json", "trace_bad.json"],
];

fn csets(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_csets"))
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cli_determinism() -> Outcome {
    for args in FIXTURE_RUNS {
        let first = csets(args);
        let code = first.status.code();
        ensure(matches!(code, Some(0 | 1)), || format!("{args:?} exited {code:?}"))?;
        serde_json::from_slice::<serde_json::Value>(&first.stdout).map_err(|e| format!("{args:?}: {e}"))?;
        for _ in 0..2 {
            let again = csets(args);
            ensure(again.stdout == first.stdout && again.status.code() == code, || format!("{args:?} differs"))?;
        }
    }
    for (args, want) in [
        (&["rado", "check", "schur.mat"][..], 0),
        (&["vdw", "--coloring", "rrbb.txt", "--k", "3"][..], 1),
        (&["rado", "check", "malformed.mat"][..], 2),
        (&["rado", "check", "missing.mat"][..], 2),
    ] {
        let out = csets(args);
        ensure(out.status.code() == Some(want), || format!("{args:?} exited {:?}, want {want}", out.status.code()))?;
        if want == 2 {
            ensure(out.stdout.is_empty() && !out.stderr.is_empty(), || format!("{args:?} wrote to stdout"))?;
        }
    }
    Ok(format!("{} invocations byte-identical across 3 runs, exit codes 0/1/2 as specified", FIXTURE_RUNS.len()))
}

type Criterion = (&'static str, u64, fn() -> Outcome);

const CRITERIA: &[Criterion] = &[
    ("rado decider vs ordered-partition oracle", 10_000, rado_decider),
    ("schur desk fact", 1_000, schur),
    ("van der waerden W(3,2) = 9", 1_000, van_der_waerden),
    ("hales-jewett desk fact", 1_000, hales_jewett),
    ("entering times of the indicator word", 5_000, round_trip),
    ("j-witness vs double loop", 10_000, j_oracle),
    ("partition reduction end to end", 30_000, reduction),
    ("family algebra laws", 5_000, families),
    ("scale and block closures", 5_000, closures),
    ("cst closed loop", 10_000, cst_loop),
    ("cli determinism and exit codes", 60_000, cli_determinism),
];

fn main() {
    let mut failed = 0;
    for (i, (name, limit_ms, run)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_millis(*limit_ms) => {
                Err(format!("{detail}, but took {took:.2?} (limit {limit_ms} ms)"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{took:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
