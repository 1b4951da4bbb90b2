//! Report assembly, fixture verification and batch decode trials behind the
//! command-line front end.

use crate::bilinear::{build_full_cfft, CfftPlan, PlanVariant};
use crate::cyclotomic::compute_cosets;
use crate::galois::{horner_eval, FieldSpec, Gf};
use crate::reduction::{
    reduce_dual_partial, reduce_partial, search_rotation, ReducedPlan, SupportSpec,
};
use crate::reference;
use crate::rsdecode::{encode, ChienOption, CodeSpec, RsDecoder};
use crate::slp::{
    parse_slp_text, plan_to_slp, CostReport, CseOptions, LineRhs, StraightLineProgram,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Syndromes,
    Chien,
    ForneyA,
    TauEven,
    TauOddOpt1,
    TauOddOpt2,
    Full,
    Decode,
    VerifyFixture,
}

impl Task {
    pub fn support(&self, t: usize) -> Option<SupportSpec> {
        let two_t = 2 * t;
        match self {
            Task::Syndromes => Some(SupportSpec::spectral(0..two_t)),
            Task::Chien => Some(SupportSpec::temporal(0..=two_t)),
            Task::ForneyA => Some(SupportSpec::temporal(0..two_t)),
            Task::TauEven => Some(SupportSpec::temporal(0..=t)),
            Task::TauOddOpt1 => Some(SupportSpec::temporal((1..two_t).step_by(2))),
            Task::TauOddOpt2 => Some(SupportSpec::temporal(0..t)),
            _ => None,
        }
    }
}

/// One run of the tool: field, code, task and reproducibility knobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub m: u32,
    /// Primitive polynomial bitmask; None picks the shipped default.
    pub prim_poly: Option<u32>,
    pub n: usize,
    pub k: usize,
    pub task: Task,
    pub variant: Option<PlanVariant>,
    /// 1, 2 or automatic selection for the odd-half evaluation.
    pub option: Option<u8>,
    pub trials: usize,
    pub seed: u64,
    pub cse_restarts: u32,
}

impl RunConfig {
    pub fn field(&self) -> Result<Arc<FieldSpec>, crate::galois::FieldError> {
        let poly = match self.prim_poly {
            Some(p) => p,
            None => crate::galois::default_prim_poly(self.m)
                .ok_or(crate::galois::FieldError::DegreeMismatch)?,
        };
        Ok(Arc::new(FieldSpec::new(self.m, poly)?))
    }

    pub fn code(&self) -> Result<CodeSpec, Box<dyn std::error::Error>> {
        Ok(CodeSpec::new(self.field()?, self.n, self.k)?)
    }

    pub fn cse(&self) -> CseOptions {
        CseOptions { restarts: self.cse_restarts, seed: self.seed, ..CseOptions::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub label: String,
    pub n_mult: usize,
    pub n_add: usize,
    pub n_div: usize,
    pub total: usize,
    /// Published (mult, add, total) for the same cell, when the literature
    /// reports one, with the signed total delta.
    pub target: Option<(usize, usize, usize)>,
    pub delta_total: Option<i64>,
}

impl ReportRow {
    fn new(label: &str, m: u32, n_mult: usize, n_add: usize, n_div: usize) -> ReportRow {
        let c = CostReport::new(m, n_mult, n_add, n_div);
        ReportRow {
            label: label.to_string(),
            n_mult,
            n_add,
            n_div,
            total: c.total,
            target: None,
            delta_total: None,
        }
    }

    fn with_target(mut self, t: Option<(usize, usize, usize)>) -> ReportRow {
        if let Some(t) = t {
            self.delta_total = Some(self.total as i64 - t.2 as i64);
        }
        self.target = t;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub rows: Vec<ReportRow>,
    pub m: u32,
    pub prim_poly: String,
    pub code: (usize, usize),
    pub task: Task,
    pub kernels_used: Vec<(usize, usize)>,
    pub cse_restarts: u32,
    pub notes: Vec<String>,
}

impl TableReport {
    /// Plain-text rendering mirroring the published table layout.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "({}, {}) over GF(2^{}) poly {}  task {:?}\n",
            self.code.0, self.code.1, self.m, self.prim_poly, self.task
        ));
        out.push_str(&format!(
            "{:<28} {:>8} {:>8} {:>6} {:>9} {:>22}\n",
            "row", "Mult.", "Add.", "Div.", "Total", "published (delta)"
        ));
        for r in &self.rows {
            let t = match (r.target, r.delta_total) {
                (Some(t), Some(d)) => format!("{} ({:+})", t.2, d),
                _ => "-".to_string(),
            };
            out.push_str(&format!(
                "{:<28} {:>8} {:>8} {:>6} {:>9} {:>22}\n",
                r.label, r.n_mult, r.n_add, r.n_div, r.total, t
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

fn slp_add_count(p: &StraightLineProgram) -> usize {
    p.counts().adds
}

/// Builds a reduced plan for the task and variant, ready for counting.
pub fn build_task_plan(
    field: &Arc<FieldSpec>,
    t: usize,
    task: Task,
    variant: PlanVariant,
) -> Result<ReducedPlan, crate::bilinear::BilinearError> {
    let sup = task.support(t).expect("transform task");
    let cs = search_rotation(field, &sup, variant);
    let plan = build_full_cfft(field, &cs, variant)?;
    let rp = match sup.kind {
        crate::reduction::SupportKind::Spectral => reduce_partial(&plan, &sup).expect("support"),
        crate::reduction::SupportKind::Temporal => {
            reduce_dual_partial(&plan, &sup).expect("support")
        }
    };
    Ok(rp)
}

/// Builds plans, reduces, shares subexpressions and tallies one table of
/// rows, each annotated with the published target where one exists.
pub fn cmd_report(cfg: &RunConfig) -> Result<TableReport, Box<dyn std::error::Error>> {
    let field = cfg.field()?;
    let code = CodeSpec::new(field.clone(), cfg.n, cfg.k)?;
    let m = field.m();
    let n = field.n();
    let cse = cfg.cse();
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut kernels_used: Vec<(usize, usize)> = Vec::new();
    for c in &compute_cosets(n).cosets {
        let s = c.size();
        if !kernels_used.iter().any(|&(l, _)| l == s) {
            kernels_used.push((s, crate::bilinear::builtin_kernel(s)?.mults));
        }
    }
    kernels_used.sort_unstable();

    let variants: Vec<PlanVariant> = match cfg.variant {
        Some(v) => vec![v],
        None => vec![PlanVariant::Scfft, PlanVariant::Dcfft],
    };

    let count_plan = |plan: &CfftPlan, label: &str, extra_mults: usize| -> (ReportRow, usize) {
        let slp = plan_to_slp(plan, &cse);
        let adds = slp_add_count(&slp);
        (
            ReportRow::new(label, m, plan.mult_count() + extra_mults, adds, 0),
            adds,
        )
    };

    match cfg.task {
        Task::Syndromes => {
            let syn = reference::syndrome_row(n);
            for v in &variants {
                let rp = build_task_plan(&field, code.t, Task::Syndromes, *v)?;
                let label = match v {
                    PlanVariant::Scfft => "syndromes SCFFT/ICFFT",
                    PlanVariant::Dcfft => "syndromes DCFFT",
                };
                let (row, _) = count_plan(&rp.base, label, 0);
                let target = syn.map(|s| match v {
                    PlanVariant::Scfft => s.scfft,
                    PlanVariant::Dcfft => s.dcfft,
                });
                rows.push(row.with_target(target));
            }
            if let Some(s) = syn {
                let h = ReportRow::new("Horner baseline", m, s.horner.0, s.horner.1, 0);
                rows.push(h);
                if let Some(pf) = s.prime_factor {
                    rows.push(
                        ReportRow::new("prime-factor (reference)", m, pf.0, pf.1, 0)
                            .with_target(Some(pf)),
                    );
                }
            }
            notes.push(
                "published additive counts assume the stronger elimination of the cited \
                 algorithm; deltas are reported, not hidden"
                    .into(),
            );
        }
        Task::Chien | Task::ForneyA | Task::TauEven | Task::TauOddOpt1 | Task::TauOddOpt2 => {
            let sr = reference::search_row(n);
            for v in &variants {
                let rp = build_task_plan(&field, code.t, cfg.task, *v)?;
                let extra = if cfg.task == Task::TauOddOpt2 { n } else { 0 };
                let label = format!("{:?} {}", cfg.task, v);
                let (row, _) = count_plan(&rp.base, &label, extra);
                let target = sr.map(|s| {
                    let c = match (cfg.task, v) {
                        (Task::ForneyA, PlanVariant::Dcfft) => s.evaluator_dcfft,
                        (Task::ForneyA, PlanVariant::Scfft) => s.evaluator_scfft,
                        (Task::TauEven, PlanVariant::Dcfft) => s.even_dcfft,
                        (Task::TauEven, PlanVariant::Scfft) => s.even_scfft,
                        (Task::TauOddOpt1, PlanVariant::Dcfft) => s.odd1_dcfft,
                        (Task::TauOddOpt1, PlanVariant::Scfft) => s.odd1_scfft,
                        (Task::TauOddOpt2, PlanVariant::Dcfft) => s.odd2_dcfft,
                        (Task::TauOddOpt2, PlanVariant::Scfft) => s.odd2_scfft,
                        _ => return None,
                    };
                    Some((c.0, c.1, c.3))
                });
                rows.push(row.with_target(target.flatten()));
            }
            if cfg.task != Task::Chien {
                if let Some(s) = sr {
                    rows.push(
                        ReportRow::new("misc (combine + divisions)", m, s.misc.0, s.misc.1, s.misc.2)
                            .with_target(Some((s.misc.0, s.misc.1, s.misc.3))),
                    );
                }
            }
        }
        Task::Full => {
            let pr = reference::pipeline_row(n);
            for v in &variants {
                let cs = compute_cosets(n);
                let plan = build_full_cfft(&field, &cs, *v)?;
                let label = format!("full {}", v);
                let (row, _) = count_plan(&plan, &label, 0);
                let target = match v {
                    PlanVariant::Dcfft => {
                        pr.map(|p| (p.inverse_full.0, p.inverse_full.1, p.inverse_full.3))
                    }
                    PlanVariant::Scfft => None,
                };
                rows.push(row.with_target(target));
            }
        }
        Task::Decode | Task::VerifyFixture => {
            return Err("decode and verify-fixture produce their own summaries".into());
        }
    }

    Ok(TableReport {
        rows,
        m,
        prim_poly: format!("{:#x}", field.prim_poly()),
        code: (cfg.n, cfg.k),
        task: cfg.task,
        kernels_used,
        cse_restarts: cfg.cse_restarts,
        notes,
    })
}

/// The shipped syndrome-computation fixture for the (255, 223) code.
pub struct Fixture {
    pub pre_text: String,
    pub post_text: String,
    pub manifest: FixtureManifest,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureManifest {
    pub code: FixtureCode,
    pub field: FixtureField,
    pub input_order: Vec<usize>,
    /// Slot name -> alpha exponent for the pointwise layer.
    pub constants: HashMap<String, u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureCode {
    pub n: usize,
    pub k: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureField {
    pub m: u32,
    pub prim_poly: String,
}

pub const FIXTURE_PRE: &str = include_str!("../fixtures/syndrome255_pre.slp");
pub const FIXTURE_POST: &str = include_str!("../fixtures/syndrome255_post.slp");
pub const FIXTURE_MANIFEST: &str = include_str!("../fixtures/syndrome255_c.json");

impl Fixture {
    pub fn shipped() -> Result<Fixture, Box<dyn std::error::Error>> {
        Ok(Fixture {
            pre_text: FIXTURE_PRE.to_string(),
            post_text: FIXTURE_POST.to_string(),
            manifest: serde_json::from_str(FIXTURE_MANIFEST)?,
        })
    }

    pub fn from_dir(dir: &std::path::Path) -> Result<Fixture, Box<dyn std::error::Error>> {
        Ok(Fixture {
            pre_text: std::fs::read_to_string(dir.join("syndrome255_pre.slp"))?,
            post_text: std::fs::read_to_string(dir.join("syndrome255_post.slp"))?,
            manifest: serde_json::from_str(&std::fs::read_to_string(
                dir.join("syndrome255_c.json"),
            )?)?,
        })
    }
}

/// Per output-statement verdict from executing the fixture.
#[derive(Debug, Clone, Serialize)]
pub struct StatementVerdict {
    /// Position among the output statements, in file order.
    pub statement: usize,
    /// Index printed in the fixture.
    pub printed_index: u64,
    /// The syndrome index this statement actually computes, when a unique
    /// one matches on every trial.
    pub matches_index: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureVerdict {
    pub pre_additions: usize,
    pub post_additions: usize,
    pub constant_count: usize,
    pub non_one_constants: usize,
    pub trials: usize,
    /// Printed indices that are assigned once and verify as printed.
    pub clean_indices: Vec<u64>,
    /// Printed indices assigned more than once.
    pub duplicated_indices: Vec<u64>,
    /// Syndrome indices never assigned under their own name.
    pub missing_indices: Vec<u64>,
    pub statements: Vec<StatementVerdict>,
    /// True when every syndrome index is produced by exactly one statement
    /// after resolving the mislabeled ones.
    pub full_coverage: bool,
    pub parse_warnings: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixtureError {
    CountMismatch(String),
    Parse(String),
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureError::CountMismatch(s) => write!(f, "count mismatch: {s}"),
            FixtureError::Parse(s) => write!(f, "parse: {s}"),
        }
    }
}

impl std::error::Error for FixtureError {}

/// Parses the fixture, asserts its published counts, executes it on seeded
/// random vectors and reports which output statements match which syndrome
/// indices under the Horner baseline.
pub fn cmd_verify_fixture(fx: &Fixture, trials: usize, seed: u64) -> Result<FixtureVerdict, FixtureError> {
    let (pre, pre_warn) =
        parse_slp_text(&fx.pre_text, &[]).map_err(|e| FixtureError::Parse(e.to_string()))?;
    let (post, post_warn) =
        parse_slp_text(&fx.post_text, &["S"]).map_err(|e| FixtureError::Parse(e.to_string()))?;
    let pre_adds = pre.counts().adds;
    let post_adds = post.counts().adds;
    if pre_adds != 3793 {
        return Err(FixtureError::CountMismatch(format!("pre additions {pre_adds} != 3793")));
    }
    if post_adds != 177 {
        return Err(FixtureError::CountMismatch(format!("post additions {post_adds} != 177")));
    }
    let n_slots = fx.manifest.constants.len();
    if n_slots != 187 {
        return Err(FixtureError::CountMismatch(format!("{n_slots} constants != 187")));
    }
    let non_one = fx.manifest.constants.values().filter(|&&e| e != 0).count();
    if non_one != 149 {
        return Err(FixtureError::CountMismatch(format!("{non_one} non-one constants != 149")));
    }

    let poly = u32::from_str_radix(fx.manifest.field.prim_poly.trim_start_matches("0x"), 16)
        .map_err(|e| FixtureError::Parse(e.to_string()))?;
    let field = FieldSpec::new(fx.manifest.field.m, poly)
        .map_err(|e| FixtureError::Parse(e.to_string()))?;
    let n = field.n();
    let two_t = fx.manifest.code.n - fx.manifest.code.k;

    // constants vector aligned to the pre outputs p_0..p_186
    let mut cvec = vec![Gf::ONE; n_slots];
    for (name, &e) in &fx.manifest.constants {
        let idx: usize = name
            .trim_start_matches("g_")
            .trim_matches(|c| c == '{' || c == '}')
            .parse()
            .map_err(|_| FixtureError::Parse(format!("bad constant slot {name}")))?;
        cvec[idx] = field.alpha_pow(e as i64);
    }

    // output statements in file order
    let s_lines: Vec<(usize, u64)> = post
        .lines
        .iter()
        .enumerate()
        .filter(|(_, l)| post.name(l.dst).kind == "S")
        .map(|(i, l)| (i, post.name(l.dst).index))
        .collect();

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // candidate matches per statement, narrowed per trial
    let mut candidates: Vec<Vec<u64>> = vec![(0..two_t as u64).collect(); s_lines.len()];

    for _ in 0..trials {
        let r: Vec<Gf> = (0..n).map(|_| Gf(rng.gen_range(0..=n as u16))).collect();
        let perm_in: Vec<Gf> = fx.manifest.input_order.iter().map(|&i| r[i]).collect();
        let pvals = pre.eval(&perm_in, &field).map_err(|e| FixtureError::Parse(e.to_string()))?;
        let gvals: Vec<Gf> = pvals
            .iter()
            .zip(&cvec)
            .map(|(&p, &c)| field.mul(p, c))
            .collect();
        let horner: Vec<Gf> = (0..two_t)
            .map(|i| horner_eval(&r, field.alpha_pow(i as i64), &field).0)
            .collect();
        // walk post lines recording each S statement value
        let mut env: HashMap<u32, Gf> = HashMap::new();
        for (slot, &v) in post.inputs.iter().zip(&gvals) {
            env.insert(*slot, v);
        }
        let mut s_ptr = 0usize;
        for (li, line) in post.lines.iter().enumerate() {
            let v = match &line.rhs {
                LineRhs::Sum(ops) => ops.iter().fold(Gf::ZERO, |acc, o| acc + env[o]),
                LineRhs::MulConst { src, c } => field.mul(env[src], *c),
            };
            env.insert(line.dst, v);
            if s_ptr < s_lines.len() && s_lines[s_ptr].0 == li {
                candidates[s_ptr].retain(|&cand| horner[cand as usize] == v);
                s_ptr += 1;
            }
        }
    }

    let statements: Vec<StatementVerdict> = s_lines
        .iter()
        .zip(&candidates)
        .enumerate()
        .map(|(i, (&(_, printed), cands))| StatementVerdict {
            statement: i,
            printed_index: printed,
            matches_index: if cands.len() == 1 { Some(cands[0]) } else { None },
        })
        .collect();

    let mut printed_count: HashMap<u64, usize> = HashMap::new();
    for s in &statements {
        *printed_count.entry(s.printed_index).or_default() += 1;
    }
    let duplicated: Vec<u64> = {
        let mut d: Vec<u64> = printed_count
            .iter()
            .filter(|(_, &c)| c > 1)
            .map(|(&i, _)| i)
            .collect();
        d.sort_unstable();
        d
    };
    let missing: Vec<u64> = (0..two_t as u64)
        .filter(|i| !printed_count.contains_key(i))
        .collect();
    let clean: Vec<u64> = {
        let mut c: Vec<u64> = statements
            .iter()
            .filter(|s| {
                printed_count[&s.printed_index] == 1 && s.matches_index == Some(s.printed_index)
            })
            .map(|s| s.printed_index)
            .collect();
        c.sort_unstable();
        c
    };
    // full coverage under resolved labels: every syndrome index produced by
    // exactly one statement
    let mut resolved: HashMap<u64, usize> = HashMap::new();
    for s in &statements {
        if let Some(t) = s.matches_index {
            *resolved.entry(t).or_default() += 1;
        }
    }
    let full_coverage = (0..two_t as u64).all(|i| resolved.get(&i) == Some(&1));

    Ok(FixtureVerdict {
        pre_additions: pre_adds,
        post_additions: post_adds,
        constant_count: n_slots,
        non_one_constants: non_one,
        trials,
        clean_indices: clean,
        duplicated_indices: duplicated,
        missing_indices: missing,
        statements,
        full_coverage,
        parse_warnings: pre_warn.len() + post_warn.len(),
    })
}

/// Cost of the fixture under the weighted metric.
pub fn fixture_cost(fx_pre_adds: usize, fx_post_adds: usize, mults: usize, m: u32) -> CostReport {
    CostReport::new(m, mults, fx_pre_adds + fx_post_adds, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    TimeDomain,
    TransformDomain,
    Both,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecodeSummary {
    pub trials: usize,
    pub successes: usize,
    pub failures_flagged: usize,
    pub miscorrections: usize,
    /// Trials where the two pipelines disagreed (always zero in a healthy
    /// build; reported, never silently ignored).
    pub pipeline_disagreements: usize,
    pub stage_costs: Vec<(String, CostReport)>,
}

/// Runs seeded decode trials. Error/erasure weights are drawn uniformly with
/// 2 nu + mu <= max_weight (the spec's correctable budget when max_weight is
/// n - k; pass larger to exercise overload behaviour).
pub fn cmd_decode(
    cfg: &RunConfig,
    pipeline: Pipeline,
    max_weight: usize,
) -> Result<DecodeSummary, Box<dyn std::error::Error>> {
    let code = cfg.code()?;
    let mut dec = RsDecoder::new(code.clone())?;
    match cfg.option {
        Some(1) => dec.option = ChienOption::Direct,
        Some(2) => dec.option = ChienOption::HalfThenScale,
        _ => {}
    }
    let f = code.field.clone();
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let mut summary = DecodeSummary {
        trials: cfg.trials,
        successes: 0,
        failures_flagged: 0,
        miscorrections: 0,
        pipeline_disagreements: 0,
        stage_costs: Vec::new(),
    };
    let card = f.n() as u16 + 1;
    for _ in 0..cfg.trials {
        let msg: Vec<Gf> = (0..code.k).map(|_| Gf(rng.gen_range(0..card))).collect();
        let w = encode(&msg, &code)?;
        let nu_max = max_weight / 2;
        let nu = rng.gen_range(0..=nu_max);
        let mu = rng.gen_range(0..=(max_weight - 2 * nu));
        let mut positions: Vec<usize> = (0..code.n).collect();
        positions.shuffle(&mut rng);
        let mut r = w.clone();
        for &p in &positions[..nu] {
            let old = r[p];
            loop {
                r[p] = Gf(rng.gen_range(0..card));
                if r[p] != old {
                    break;
                }
            }
        }
        let erasures: Vec<usize> = positions[nu..nu + mu].to_vec();
        for &p in &erasures {
            r[p] = Gf(rng.gen_range(0..card));
        }
        let res_time = match pipeline {
            Pipeline::TransformDomain => None,
            _ => Some(dec.decode_time_domain(&r, &erasures)),
        };
        let res_tf = match pipeline {
            Pipeline::TimeDomain => None,
            _ => Some(dec.decode_transform_domain(&r, &erasures)),
        };
        if let (Some(a), Some(b)) = (&res_time, &res_tf) {
            if a.codeword != b.codeword {
                summary.pipeline_disagreements += 1;
            }
        }
        let primary = res_time.as_ref().or(res_tf.as_ref()).unwrap();
        match &primary.codeword {
            Some(cw) if cw == &w => summary.successes += 1,
            Some(_) => summary.miscorrections += 1,
            None => summary.failures_flagged += 1,
        }
        if summary.stage_costs.is_empty() {
            summary.stage_costs = primary.stage_costs.clone();
        }
    }
    Ok(summary)
}

/// JSON container for a plan; matrices as hex rows, constants as discrete
/// logs.
#[derive(Debug, Clone, Serialize)]
pub struct PlanJson {
    pub variant: PlanVariant,
    pub m: u32,
    pub prim_poly: String,
    pub input_index: Vec<usize>,
    pub output_index: Vec<usize>,
    pub pre_bits: Vec<String>,
    pub c_exponents: Vec<i64>,
    pub post_bits: Vec<String>,
    pub blocks: Vec<BlockJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<SupportSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotations: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub struck_slots: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockJson {
    pub leader: usize,
    pub size: usize,
    pub rotation: usize,
    pub slots: (usize, usize),
}

pub fn plan_json(plan: &CfftPlan) -> PlanJson {
    PlanJson {
        variant: plan.variant,
        m: plan.field.m(),
        prim_poly: format!("{:#x}", plan.field.prim_poly()),
        input_index: plan.input_index.clone(),
        output_index: plan.output_index.clone(),
        pre_bits: plan.pre.rows_hex(),
        c_exponents: plan
            .c
            .iter()
            .map(|&g| plan.field.log(g).map(|l| l as i64).unwrap_or(-1))
            .collect(),
        post_bits: plan.post.rows_hex(),
        blocks: plan
            .blocks
            .iter()
            .map(|b| BlockJson {
                leader: b.leader,
                size: b.size,
                rotation: b.rotation,
                slots: (b.slots.start, b.slots.end),
            })
            .collect(),
        support: None,
        rotations: None,
        struck_slots: None,
    }
}

pub fn reduced_plan_json(rp: &ReducedPlan) -> PlanJson {
    let mut j = plan_json(&rp.base);
    j.support = Some(rp.support.clone());
    j.rotations = Some(rp.rotations.clone());
    j.struck_slots = Some(rp.removed_mult_slots.clone());
    j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_parses_and_counts() {
        let fx = Fixture::shipped().unwrap();
        let v = cmd_verify_fixture(&fx, 20, 1).unwrap();
        assert_eq!(v.pre_additions, 3793);
        assert_eq!(v.post_additions, 177);
        assert_eq!(v.constant_count, 187);
        assert_eq!(v.non_one_constants, 149);
        assert_eq!(v.duplicated_indices, vec![11, 13, 17, 22, 26]);
        assert_eq!(v.missing_indices, vec![7, 10, 14, 20, 28]);
        assert!(v.full_coverage);
        assert_eq!(v.parse_warnings, 5);
    }

    #[test]
    fn fixture_perturbation_detected() {
        let mut fx = Fixture::shipped().unwrap();
        // delete one line
        let cut = fx.pre_text.find('\n').unwrap();
        fx.pre_text = fx.pre_text[cut + 1..].to_string();
        assert!(matches!(
            cmd_verify_fixture(&fx, 1, 1),
            Err(FixtureError::CountMismatch(_))
        ));
    }

    #[test]
    fn decode_summary_small() {
        let cfg = RunConfig {
            m: 5,
            prim_poly: None,
            n: 31,
            k: 25,
            task: Task::Decode,
            variant: None,
            option: None,
            trials: 50,
            seed: 7,
            cse_restarts: 0,
        };
        let s = cmd_decode(&cfg, Pipeline::Both, 6).unwrap();
        assert_eq!(s.successes, 50);
        assert_eq!(s.miscorrections, 0);
        assert_eq!(s.pipeline_disagreements, 0);
        // zero trials
        let cfg0 = RunConfig { trials: 0, ..cfg };
        let s0 = cmd_decode(&cfg0, Pipeline::Both, 6).unwrap();
        assert_eq!(s0.successes + s0.failures_flagged + s0.miscorrections, 0);
    }

    #[test]
    fn report_small_code() {
        let cfg = RunConfig {
            m: 5,
            prim_poly: None,
            n: 31,
            k: 25,
            task: Task::Syndromes,
            variant: None,
            option: None,
            trials: 0,
            seed: 1,
            cse_restarts: 0,
        };
        let rep = cmd_report(&cfg).unwrap();
        assert_eq!(rep.rows[0].n_mult, 18);
        // totals recompute
        for r in &rep.rows {
            assert_eq!(
                r.total,
                CostReport::new(rep.m, r.n_mult, r.n_add, r.n_div).total
            );
        }
        let txt = rep.render();
        assert!(txt.contains("syndromes SCFFT"));
    }
}
