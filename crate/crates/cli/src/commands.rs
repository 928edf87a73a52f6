//! The subcommands as library functions returning a text and a JSON rendering.

use omnivocal_core::{
    check_g_over_k_monotone, decide_three_terminal, decide_via_lp, g, isentropy_check, pin_sk_capacity,
    silent_capacity, singleton_minimizer_check, sk_capacity, sufficient_condition, Accumulation,
    EntropyOracle, Isentropy, JointSource, LpOptions, MinimizerMethod, MinimizerStatus, Normalization,
    OmnivocalityVerdict, PinGraph, SealedSource, TerminalSet, Tolerances, VerdictStatus,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::{compact, list, partitions_json, partitions_text, set_json, Render};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub tol: Tolerances,
    pub normalization: Normalization,
    pub accumulation: Accumulation,
    pub lp: LpOptions,
}

impl RunConfig {
    pub fn new(tie: f64) -> Result<Self, CliError> {
        if !(tie.is_finite() && tie > 0.0) {
            return Err(CliError::Input(format!("--tol must be a positive number, got {tie}")));
        }
        Ok(RunConfig { tol: Tolerances::new(tie), ..Self::default() })
    }

    /// Compensated entropy sums and tightened pivoting.
    pub fn precise(self) -> Self {
        RunConfig { accumulation: Accumulation::Compensated, lp: LpOptions::tightened(), ..self }
    }

    pub fn seal(&self, source: JointSource) -> Result<SealedSource, CliError> {
        Ok(source.seal_with(self.accumulation)?)
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: Tolerances::default(),
            normalization: Normalization::Strict,
            accumulation: Accumulation::Naive,
            lp: LpOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub text: String,
    pub json: Value,
}

impl Output {
    pub fn render(&self, json: bool) -> String {
        if json {
            self.json.to_string()
        } else {
            self.text.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OmnivocalityMethod {
    Condition,
    Lp,
    Three,
    All,
}

pub fn capacity<O>(oracle: &O, config: &RunConfig) -> Result<Output, CliError>
where
    O: EntropyOracle + ?Sized,
    O::Value: Render,
{
    let r = sk_capacity(oracle, &config.tol)?;
    Ok(Output {
        text: format!(
            "C = {} bits; argmin: {}; partitions examined: {}",
            r.value.text(),
            partitions_text(&r.argmin),
            r.partitions_examined
        ),
        json: json!({
            "capacity": r.value.json(),
            "argmin": partitions_json(&r.argmin),
            "partitions_examined": r.partitions_examined,
        }),
    })
}

/// Exact capacity of a PIN graph, plus every omnivocality decision for `m >= 3`.
pub fn pin(graph: &PinGraph, config: &RunConfig) -> Result<Output, CliError> {
    let r = pin_sk_capacity(graph)?;
    let mut text = format!(
        "C = {} bits; argmin: {}; partitions examined: {}",
        r.value.text(),
        partitions_text(&r.argmin),
        r.partitions_examined
    );
    let mut json = json!({
        "m": graph.terminals(),
        "capacity": r.value.json(),
        "capacity_f64": omnivocal_core::Scalar::to_f64(&r.value).json(),
        "argmin": partitions_json(&r.argmin),
        "partitions_examined": r.partitions_examined,
    });
    if graph.terminals() >= 3 {
        let o = omnivocality(&graph.exact_oracle(), OmnivocalityMethod::All, config)?;
        text.push_str("\nomnivocality: ");
        text.push_str(&o.text);
        json["omnivocality"] = o.json;
    }
    Ok(Output { text, json })
}

pub fn singleton<O>(oracle: &O, method: MinimizerMethod, config: &RunConfig) -> Result<Output, CliError>
where
    O: EntropyOracle + ?Sized,
    O::Value: Render,
{
    let c = singleton_minimizer_check(oracle, method, &config.tol)?;
    let mut text = String::from(c.status.name());
    if let Some(w) = &c.witness {
        let label = match c.status {
            MinimizerStatus::NonUniqueMinimizer => "tie at",
            MinimizerStatus::NotMinimizer => "beaten by",
            _ => "near-tie at",
        };
        text.push_str(&format!("; {label} {}", w.partition));
    }
    text.push_str(&format!(" ({} comparisons)\nΔ(S) = {}", c.comparisons, c.delta_singleton.text()));
    if let Some(w) = &c.witness {
        text.push_str(&format!("; Δ({}) = {}", w.partition, w.delta.text()));
    }
    let witness = c.witness.as_ref().map_or(Value::Null, |w| {
        json!({
            "partition": w.partition.to_string(),
            "subset": w.subset.map(set_json),
            "delta": w.delta.json(),
        })
    });
    let method_name = match method {
        MinimizerMethod::Brute => "brute",
        MinimizerMethod::Prop1 => "prop1",
    };
    Ok(Output {
        text,
        json: json!({
            "status": c.status.name(),
            "method": method_name,
            "comparisons": c.comparisons,
            "delta_singleton": c.delta_singleton.json(),
            "witness": witness,
        }),
    })
}

pub fn silent<O>(oracle: &O, speakers: &str, config: &RunConfig) -> Result<Output, CliError>
where
    O: EntropyOracle + ?Sized,
    O::Value: Render,
{
    let t = TerminalSet::parse(speakers, oracle.terminals())
        .map_err(|e| CliError::Input(format!("--speakers {speakers:?}: {e}")))?;
    let r = silent_capacity(oracle, t, &config.lp)?;
    let mut text = format!(
        "T = {t}; H(X_T) = {}; C‖T = {}; R_min = {}",
        r.h_t.text(),
        r.capacity.text(),
        r.r_min.text()
    );
    if let Some(b) = &r.lemma2_bound {
        text.push_str(&format!("; Lemma2 = {}", b.text()));
    }
    let rates: Vec<String> = r.optimal_rates.iter().map(|(i, v)| format!("R{i} = {}", v.text())).collect();
    let binding: Vec<String> = r.binding_constraints.iter().map(|c| format!("{:?}", c.subset)).collect();
    text.push_str(&format!("\nrates: {}\nbinding: {}", rates.join(", "), binding.join(", ")));
    Ok(Output {
        text,
        json: json!({
            "speakers": set_json(t),
            "h_t": r.h_t.json(),
            "r_min": r.r_min.json(),
            "silent_capacity": r.capacity.json(),
            "lemma2_bound": r.lemma2_bound.as_ref().map(Render::json),
            "optimal_rates": r.optimal_rates.iter().map(|(i, v)| json!({"terminal": i, "rate": v.json()})).collect::<Vec<_>>(),
            "binding_constraints": r.binding_constraints.iter()
                .map(|c| json!({"subset": set_json(c.subset), "lower_bound": c.lower_bound.json()}))
                .collect::<Vec<_>>(),
        }),
    })
}

fn verdict_line<V>(v: &OmnivocalityVerdict<V>) -> String {
    match v.status {
        VerdictStatus::Necessary => "Necessary".into(),
        VerdictStatus::NotNecessary => {
            let w = v.silent_witness.as_ref().expect("NotNecessary carries a witness");
            let mut s = format!("NotNecessary; {}; silent {:?}", w.case.name(), w.silent);
            if w.alternatives.len() > 1 {
                let alts: Vec<String> = w.alternatives.iter().map(|a| format!("{a:?}")).collect();
                s.push_str(&format!(" (admissible: {})", alts.join(", ")));
            }
            s
        }
        VerdictStatus::Unknown => "Unknown (open-conjecture territory: the minimizer is not unique)".into(),
        VerdictStatus::NumericallyAmbiguous => {
            "NumericallyAmbiguous (a decisive gap lies inside the ambiguity band; try --precise)".into()
        }
    }
}

fn verdict_json<V: Render>(v: &OmnivocalityVerdict<V>) -> Value {
    json!({
        "status": v.status.name(),
        "method": v.method.name(),
        "minimizer": v.minimizer.map(MinimizerStatus::name),
        "silent_witness": v.silent_witness.as_ref().map(|w| json!({
            "silent": set_json(w.silent),
            "case": w.case.name(),
            "alternatives": w.alternatives.iter().map(|&a| set_json(a)).collect::<Vec<_>>(),
        })),
        "evidence": v.evidence.iter().map(|r| json!({
            "speakers": set_json(r.speakers),
            "silent_capacity": r.silent_capacity.json(),
            "capacity": r.capacity.json(),
            "gap": r.gap().json(),
        })).collect::<Vec<_>>(),
    })
}

fn evidence_text<V: Render>(v: &OmnivocalityVerdict<V>) -> String {
    v.evidence
        .iter()
        .map(|r| {
            format!(
                "\n  T = {}: C‖T = {}, C = {}, gap = {}",
                r.speakers,
                r.silent_capacity.text(),
                r.capacity.text(),
                r.gap().text()
            )
        })
        .collect()
}

pub fn omnivocality<O>(oracle: &O, method: OmnivocalityMethod, config: &RunConfig) -> Result<Output, CliError>
where
    O: EntropyOracle + ?Sized,
    O::Value: Render,
{
    let tol = &config.tol;
    let single = |v: OmnivocalityVerdict<O::Value>| Output {
        text: format!("{}{}", verdict_line(&v), evidence_text(&v)),
        json: verdict_json(&v),
    };
    match method {
        OmnivocalityMethod::Condition => return Ok(single(sufficient_condition(oracle, tol)?)),
        OmnivocalityMethod::Lp => return Ok(single(decide_via_lp(oracle, tol, &config.lp)?)),
        OmnivocalityMethod::Three => return Ok(single(decide_three_terminal(oracle, tol)?)),
        OmnivocalityMethod::All => {}
    }

    let condition = sufficient_condition(oracle, tol)?;
    let lp = decide_via_lp(oracle, tol, &config.lp)?;
    let three = if oracle.terminals() == 3 { Some(decide_three_terminal(oracle, tol)?) } else { None };
    if let Some(t) = &three {
        if t.status.is_conclusive() && lp.status.is_conclusive() && t.status != lp.status {
            return Err(CliError::Internal(format!(
                "the three-terminal criterion gives {} but the LP comparison gives {}",
                t.status.name(),
                lp.status.name()
            )));
        }
    }
    if condition.status == VerdictStatus::Necessary && lp.status == VerdictStatus::NotNecessary {
        return Err(CliError::Internal(
            "the singleton partition is the unique minimizer, yet the LP finds a silent terminal".into(),
        ));
    }

    let mut named: Vec<(&str, &OmnivocalityVerdict<O::Value>)> = vec![("condition", &condition), ("lp", &lp)];
    if let Some(t) = &three {
        named.push(("three", t));
    }
    let primary = if lp.status.is_conclusive() {
        ("lp", &lp)
    } else {
        named.iter().copied().find(|(_, v)| v.status.is_conclusive()).unwrap_or(("condition", &condition))
    };
    let mut text = verdict_line(primary.1);
    if condition.status == lp.status {
        text.push_str(" (condition + lp agree)");
    } else {
        let others: Vec<String> = named
            .iter()
            .filter(|(n, _)| *n != primary.0)
            .map(|(n, v)| format!("{n}: {}", v.status.name()))
            .collect();
        text.push_str(&format!(" (by {}; {})", primary.0, others.join(", ")));
    }
    for (n, v) in &named {
        text.push_str(&format!("\n{n}: {}", verdict_line(v)));
    }
    text.push_str(&evidence_text(&lp));

    let mut json = json!({
        "status": primary.1.status.name(),
        "decided_by": primary.0,
        "condition": verdict_json(&condition),
        "lp": verdict_json(&lp),
    });
    if let Some(t) = &three {
        json["three"] = verdict_json(t);
    }
    Ok(Output { text, json })
}

pub fn isentropy<O>(oracle: &O, config: &RunConfig) -> Result<Output, CliError>
where
    O: EntropyOracle + ?Sized,
    O::Value: Render,
{
    let profile = isentropy_check(oracle, config.tol.tie)?;
    let gs = (1..=oracle.terminals()).map(|k| g(oracle, k)).collect::<Result<Vec<_>, _>>()?;
    let monotone = if profile.is_isentropic == Isentropy::Yes {
        Some(check_g_over_k_monotone(oracle, &config.tol)?)
    } else {
        None
    };
    let mut text = format!("isentropic: {}", profile.is_isentropic.name());
    let mut worst = Value::Null;
    if let Some((a, b, spread)) = profile.worst_violation {
        let (ha, hb) = (oracle.entropy(a), oracle.entropy(b));
        text.push_str(&format!(
            "; witness H(X_{a:?}) = {} vs H(X_{b:?}) = {} (spread {})",
            ha.text(),
            hb.text(),
            spread.text()
        ));
        worst = json!({"a": set_json(a), "b": set_json(b), "h_a": ha.json(), "h_b": hb.json(), "spread": spread.json()});
    }
    text.push_str(&format!("; g = {}; g/k non-decreasing: ", list(&gs)));
    text.push_str(&match &monotone {
        Some(r) if r.holds => "yes".to_string(),
        Some(r) => format!("no (fails at k = {})", r.first_violation.unwrap_or(0)),
        None => "not applicable".to_string(),
    });
    let levels: Vec<String> = profile.levels.iter().map(compact).collect();
    text.push_str(&format!("\nlevels by size: [{}]", levels.join(", ")));
    Ok(Output {
        text,
        json: json!({
            "isentropic": profile.is_isentropic.name(),
            "levels": profile.levels.iter().map(Render::json).collect::<Vec<_>>(),
            "spread": profile.spread.json(),
            "worst_violation": worst,
            "g": gs.iter().map(Render::json).collect::<Vec<_>>(),
            "g_over_k_non_decreasing": monotone.as_ref().map(|r| r.holds),
            "first_violation": monotone.as_ref().and_then(|r| r.first_violation),
        }),
    })
}
