//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use omnivocal::generate::{exchangeable_mixture, product_tuples, random_graph, trial_rng, uniform_source};
use omnivocal::hunt::{run_hunt, write_log, HuntConfig};
use omnivocal::io::load_source;
use omnivocal_core::*;
use rand::Rng;
use std::result::Result;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn fixture(name: &str) -> SealedSource {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    load_source(&path, Normalization::Strict).unwrap().seal().unwrap()
}

fn half(n: usize) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(2))
}

/// Random weights on a few cells only; functional dependencies and exact ties
/// are common, which exercises the not-necessary branches.
fn sparse_source<R: Rng>(rng: &mut R, sizes: &[u32]) -> JointSource {
    let cells: Vec<Vec<u32>> = product_tuples(sizes).collect();
    let support = rng.gen_range(1..=cells.len().min(5));
    let mut chosen: Vec<usize> = Vec::new();
    while chosen.len() < support {
        let c = rng.gen_range(0..cells.len());
        if !chosen.contains(&c) {
            chosen.push(c);
        }
    }
    let equal = rng.gen_bool(0.5);
    let weights: Vec<f64> = chosen.iter().map(|_| if equal { 1.0 } else { rng.gen_range(1..=4) as f64 }).collect();
    let total: f64 = weights.iter().sum();
    let atoms = chosen.iter().zip(&weights).map(|(&c, w)| (cells[c].clone(), w / total)).collect();
    JointSource::new(sizes.to_vec(), atoms).unwrap()
}

/// Fixtures plus seeded uniform, sparse and exchangeable sources with m in 3..=5.
fn test_sources() -> Vec<(String, SealedSource)> {
    let mut out: Vec<(String, SealedSource)> = ["xor.json", "identical_bits.json", "unequal_marginals.json", "random4.json"]
        .iter()
        .map(|n| (n.to_string(), fixture(n)))
        .collect();
    for trial in 0..90u64 {
        let mut rng = trial_rng(6_000, trial);
        let m = 3 + (trial % 3) as usize;
        let sizes: Vec<u32> = (0..m).map(|_| rng.gen_range(1..=if m == 5 { 2 } else { 3 })).collect();
        let (kind, source) = match trial % 3 {
            0 => ("uniform", uniform_source(&mut rng, &sizes).unwrap()),
            1 => ("sparse", sparse_source(&mut rng, &sizes)),
            _ => ("mixture", exchangeable_mixture(&mut rng, m, 2, 2).unwrap()),
        };
        out.push((format!("{kind} #{trial} (m = {m})"), source.seal().unwrap()));
    }
    out
}

fn test_graphs() -> Vec<PinGraph> {
    let mut graphs: Vec<PinGraph> = (3..=5).map(|m| complete_graph(m).unwrap()).collect();
    for trial in 0..12u64 {
        let mut rng = trial_rng(7_000, trial);
        graphs.push(random_graph(&mut rng, 3 + (trial % 3) as usize, 0.6, 3).unwrap());
    }
    graphs
}

fn complete_graph_capacity() -> Outcome {
    let tol = Tolerances::default();
    let opts = LpOptions::default();
    for m in 3..=8 {
        let g = complete_graph(m).map_err(err)?;
        let r = pin_sk_capacity(&g).map_err(err)?;
        ensure(r.value == half(m), || format!("K_{m}: C = {}, want {m}/2", r.value))?;
        let s = singleton_partition(m).map_err(err)?;
        ensure(r.argmin == vec![s], || format!("K_{m}: argmin {:?}", r.argmin))?;
        let exact = g.exact_oracle();
        let cond = sufficient_condition(&exact, &tol).map_err(err)?;
        let lp = decide_via_lp(&exact, &tol, &opts).map_err(err)?;
        ensure(cond.status == VerdictStatus::Necessary, || format!("K_{m}: condition gives {:?}", cond.status))?;
        ensure(lp.status == VerdictStatus::Necessary, || format!("K_{m}: LP gives {:?}", lp.status))?;
    }
    Ok("K_3..K_8: C = m/2 exactly, argmin {S}, Necessary by condition and LP".into())
}

fn prop1_equivalence() -> Outcome {
    let tol = Tolerances::default();
    let mut conclusive = 0;
    let mut statuses = std::collections::BTreeMap::new();
    for trial in 0..300u64 {
        let mut rng = trial_rng(2_000, trial);
        let m = 3 + (trial % 2) as usize;
        let sizes = vec![2; m];
        let source = if trial < 200 { uniform_source(&mut rng, &sizes).map_err(err)? } else { sparse_source(&mut rng, &sizes) };
        let o = source.seal().map_err(err)?;
        let brute = singleton_minimizer_check(&o, MinimizerMethod::Brute, &tol).map_err(err)?;
        let prop1 = singleton_minimizer_check(&o, MinimizerMethod::Prop1, &tol).map_err(err)?;
        ensure(prop1.comparisons == (1 << m) - m - 2, || format!("trial {trial}: {} comparisons", prop1.comparisons))?;
        let ambiguous = MinimizerStatus::NumericallyAmbiguous;
        if brute.status != ambiguous && prop1.status != ambiguous {
            conclusive += 1;
            ensure(brute.status == prop1.status, || {
                format!("trial {trial}: brute {:?} vs prop1 {:?}", brute.status, prop1.status)
            })?;
            *statuses.entry(brute.status.name()).or_insert(0) += 1;
        }
    }
    Ok(format!("300 binary sources (200 dense, 100 sparse), {conclusive} conclusive, all agree; {statuses:?}"))
}

fn xor_end_to_end() -> Outcome {
    let o = fixture("xor.json");
    let tol = Tolerances::default();
    let opts = LpOptions::default();
    let c = sk_capacity(&o, &tol).map_err(err)?.value;
    ensure((c - 0.5).abs() <= 1e-9, || format!("C = {c}"))?;
    for t in ["1,2", "1,3", "2,3"] {
        let t = TerminalSet::parse(t, 3).map_err(err)?;
        let r = silent_capacity(&o, t, &opts).map_err(err)?;
        ensure(r.capacity.abs() <= 1e-9, || format!("C‖{t} = {}", r.capacity))?;
        let bound = lemma2_lower_bound(&o, t).map_err(err)?;
        ensure((bound - r.r_min).abs() <= 1e-9 && (r.r_min - 2.0).abs() <= 1e-9, || {
            format!("T = {t}: bound {bound}, R_min {}", r.r_min)
        })?;
    }
    let verdicts = [
        sufficient_condition(&o, &tol).map_err(err)?.status,
        decide_via_lp(&o, &tol, &opts).map_err(err)?.status,
        decide_three_terminal(&o, &tol).map_err(err)?.status,
    ];
    ensure(verdicts.iter().all(|&v| v == VerdictStatus::Necessary), || format!("verdicts {verdicts:?}"))?;
    Ok("C = 0.5, C‖T = 0 and bound = R_min = 2 for all pairs, Necessary x3".into())
}

fn identical_bits() -> Outcome {
    let o = fixture("identical_bits.json");
    let tol = Tolerances::default();
    let c = sk_capacity(&o, &tol).map_err(err)?.value;
    ensure((c - 1.0).abs() <= 1e-9, || format!("C = {c}"))?;
    let v = decide_three_terminal(&o, &tol).map_err(err)?;
    let w = v.silent_witness.clone().ok_or("no witness")?;
    ensure(v.status == VerdictStatus::NotNecessary && w.case == ConstructionCase::CaseI, || format!("{v:?}"))?;
    let speaker = w.silent.complement(3);
    let r = silent_capacity(&o, speaker, &LpOptions::default()).map_err(err)?;
    ensure((r.capacity - 1.0).abs() <= 1e-9, || format!("C‖{speaker} = {}", r.capacity))?;
    Ok(format!("C = 1, Case I with silent {:?}, C‖{speaker} = 1", w.silent))
}

fn three_terminal_vs_lp() -> Outcome {
    let tol = Tolerances::default();
    let opts = LpOptions::default();
    let mut tally = std::collections::BTreeMap::new();
    let mut compared = 0;
    for trial in 0..300u64 {
        let mut rng = trial_rng(5_000, trial);
        let sizes: Vec<u32> = (0..3).map(|_| rng.gen_range(1..=3)).collect();
        let source = if trial < 200 { uniform_source(&mut rng, &sizes).map_err(err)? } else { sparse_source(&mut rng, &sizes) };
        let o = source.seal().map_err(err)?;
        let three = decide_three_terminal(&o, &tol).map_err(err)?;
        let lp = decide_via_lp(&o, &tol, &opts).map_err(err)?;
        if three.status.is_conclusive() && lp.status.is_conclusive() {
            compared += 1;
            ensure(three.status == lp.status, || {
                format!("trial {trial} {sizes:?}: three {:?} vs lp {:?}", three.status, lp.status)
            })?;
            *tally.entry(three.status.name()).or_insert(0) += 1;
        }
    }
    Ok(format!("300 sources (200 dense, 100 sparse), {compared} both conclusive, all agree; {tally:?}"))
}

fn chain_checks<O: EntropyOracle + ?Sized>(o: &O, label: &str) -> Result<usize, String> {
    let m = o.terminals();
    let tol = Tolerances::default();
    let f = |v: &O::Value| v.to_f64();
    let ds = f(&delta(o, &singleton_partition(m).map_err(err)?).map_err(err)?);
    let unique = singleton_minimizer_check(o, MinimizerMethod::Prop1, &tol).map_err(err)?.status
        == MinimizerStatus::UniqueMinimizer;
    for u in 1..=m {
        let t = TerminalSet::singleton(u).complement(m);
        let r = silent_capacity(o, t, &LpOptions::default()).map_err(err)?;
        let bound = f(&lemma2_lower_bound(o, t).map_err(err)?);
        ensure(bound <= f(&r.r_min) + 1e-8, || format!("{label}, T = {t}: bound {bound} > R_min {:?}", r.r_min))?;
        let dts = f(&delta_t_singleton(o, t).map_err(err)?);
        ensure(f(&r.capacity) <= dts + 1e-8, || format!("{label}, T = {t}: C‖T {:?} > Δ_T(S) {dts}", r.capacity))?;
        if unique {
            ensure(dts < ds, || format!("{label}, T = {t}: Δ_T(S) {dts} >= Δ(S) {ds}"))?;
        }
    }
    Ok(m)
}

fn rate_bound_ordering() -> Outcome {
    let mut checked = 0;
    for (label, o) in test_sources() {
        checked += chain_checks(&o, &label)?;
    }
    for (k, g) in test_graphs().iter().enumerate() {
        checked += chain_checks(&g.exact_oracle(), &format!("graph #{k}"))?;
    }
    Ok(format!("{checked} (source, T) pairs over tabular and PIN sources"))
}

fn omniscience() -> Outcome {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for trial in 0..100u64 {
        let mut rng = trial_rng(7_100, trial);
        let m = 3 + (trial % 2) as usize;
        let sizes: Vec<u32> = (0..m).map(|_| rng.gen_range(2..=3)).collect();
        let o = uniform_source(&mut rng, &sizes).map_err(err)?.seal().map_err(err)?;
        let c = sk_capacity(&o, &tol).map_err(err)?.value;
        let full = silent_capacity(&o, o.ground_set(), &LpOptions::default()).map_err(err)?.capacity;
        worst = worst.max((c - full).abs());
        ensure((c - full).abs() <= 1e-6, || format!("trial {trial}: C = {c}, C‖[m] = {full}"))?;
    }
    Ok(format!("100 sources, largest |C - C‖[m]| = {worst:.3e}"))
}

fn region_reduction() -> Outcome {
    let mut regions = 0;
    for (label, o) in test_sources() {
        let m = o.terminals();
        for u in 1..=m {
            let t = TerminalSet::singleton(u).complement(m);
            let generic = build_rate_region(&o, t).map_err(err)?;
            let reduced = reduce_region_co_full(&o, u).map_err(err)?;
            let a: Vec<TerminalSet> = generic.constraints().iter().map(|c| c.subset).collect();
            let b: Vec<TerminalSet> = reduced.constraints().iter().map(|c| c.subset).collect();
            ensure(a == b, || format!("{label}, u = {u}: row sets differ"))?;
            for (x, y) in generic.constraints().iter().zip(reduced.constraints()) {
                ensure((x.lower_bound - y.lower_bound).abs() <= 1e-12, || {
                    format!("{label}, u = {u}, B = {}: {} vs {}", x.subset, x.lower_bound, y.lower_bound)
                })?;
            }
            regions += 1;
        }
    }
    Ok(format!("{regions} regions, identical rows and bounds (to 1e-12)"))
}

fn isentropic_minimizer<O: EntropyOracle + ?Sized>(o: &O, label: &str) -> Result<(), String> {
    let m = o.terminals();
    let tol = Tolerances::default();
    let profile = isentropy_check(o, tol.tie).map_err(err)?;
    ensure(profile.is_isentropic == Isentropy::Yes, || format!("{label}: isentropy {:?}", profile.is_isentropic))?;
    let mono = check_g_over_k_monotone(o, &tol).map_err(err)?;
    ensure(mono.holds, || format!("{label}: g/k fails at {:?}", mono.first_violation))?;
    let ds = delta(o, &singleton_partition(m).map_err(err)?).map_err(err)?.to_f64();
    for b in o.ground_set().subsets().filter(|b| (1..=m - 2).contains(&b.len())) {
        let db = delta(o, &p_b(m, b).map_err(err)?).map_err(err)?.to_f64();
        ensure(ds <= db + 1e-8, || format!("{label}, B = {b}: Δ(S) {ds} > Δ(P_B) {db}"))?;
    }
    Ok(())
}

fn isentropic_suite() -> Outcome {
    for trial in 0..100u64 {
        let mut rng = trial_rng(9_000, trial);
        let m = 3 + (trial % 3) as usize;
        let alphabet = rng.gen_range(2..=3);
        let components = rng.gen_range(1..=3);
        let o = exchangeable_mixture(&mut rng, m, alphabet, components).map_err(err)?.seal().map_err(err)?;
        isentropic_minimizer(&o, &format!("mixture #{trial}"))?;
    }
    for m in 3..=8 {
        isentropic_minimizer(&complete_graph(m).map_err(err)?.exact_oracle(), &format!("K_{m}"))?;
    }
    Ok("100 exchangeable mixtures and K_3..K_8: isentropic, g/k non-decreasing, S minimizes over P_B".into())
}

fn hunt_harness() -> Outcome {
    let config = HuntConfig {
        m: 4,
        trials: 500,
        seed: 2024,
        alphabet: vec![2; 4],
        jobs: 0,
        tol: Tolerances::default(),
        lp: LpOptions::default(),
    };
    let first = run_hunt(&config).map_err(err)?;
    let second = run_hunt(&HuntConfig { jobs: 1, ..config.clone() }).map_err(err)?;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    write_log(&first.records, &mut a).map_err(err)?;
    write_log(&second.records, &mut b).map_err(err)?;
    ensure(a == b, || "logs differ between runs".into())?;
    ensure(first.records.len() == 500, || format!("{} records", first.records.len()))?;
    for r in &first.records {
        if r.condition == MinimizerStatus::UniqueMinimizer.name() {
            ensure(r.lp == VerdictStatus::Necessary.name(), || format!("trial {}: unique minimizer, lp {}", r.trial, r.lp))?;
        }
        let candidate = r.classification == Classification::CandidateCounterexample.name();
        ensure(candidate == r.source.is_some(), || format!("trial {}: source payload mismatch", r.trial))?;
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("acceptance_hunt_m4.jsonl");
    std::fs::write(&path, &a).map_err(err)?;
    let counts: Vec<String> = first.counts.iter().map(|(c, n)| format!("{} {n}", c.name())).collect();
    Ok(format!("500 trials, deterministic; {}; log at {}", counts.join(", "), path.display()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("complete-graph PIN capacity", Duration::from_secs(5), complete_graph_capacity),
        ("minimizer shortcut equivalence", Duration::from_secs(30), prop1_equivalence),
        ("XOR source end to end", Duration::from_secs(5), xor_end_to_end),
        ("identical-bits source", Duration::from_secs(5), identical_bits),
        ("three-terminal criterion vs LP", Duration::from_secs(60), three_terminal_vs_lp),
        ("rate-bound ordering", Duration::from_secs(60), rate_bound_ordering),
        ("omniscience identity", Duration::from_secs(60), omniscience),
        ("co-full region reduction", Duration::from_secs(60), region_reduction),
        ("isentropic suite", Duration::from_secs(60), isentropic_suite),
        ("hunt harness", Duration::from_secs(600), hunt_harness),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?}): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
