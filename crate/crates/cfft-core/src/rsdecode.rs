//! Errors-and-erasures Reed-Solomon decoding on top of the transforms:
//! partial-plan syndromes, inversionless Berlekamp-Massey with erasure
//! initialization, recursive syndrome extension, and the combined Chien
//! search / errata-value evaluation driven by dual-partial plans.

use crate::bilinear::{build_full_cfft, evaluate_plan, CfftPlan, PlanVariant};
use crate::galois::{FieldSpec, Gf};
use crate::reduction::{reduce_dual_partial, reduce_partial, search_rotation, ReducedPlan, SupportSpec};
use crate::slp::CostReport;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub field: Arc<FieldSpec>,
    pub n: usize,
    pub k: usize,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeError {
    LengthMismatch,
    /// n - k must be even and positive for the supported codes.
    BadDimension,
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::LengthMismatch => write!(f, "message or word length mismatch"),
            CodeError::BadDimension => write!(f, "unsupported (n, k) dimensions"),
        }
    }
}

impl std::error::Error for CodeError {}

impl CodeSpec {
    /// Roots alpha^0 .. alpha^(n-k-1); generator g(x) is their product.
    pub fn new(field: Arc<FieldSpec>, n: usize, k: usize) -> Result<CodeSpec, CodeError> {
        if n != field.n() {
            return Err(CodeError::LengthMismatch);
        }
        if k == 0 || k >= n || (n - k) % 2 != 0 {
            return Err(CodeError::BadDimension);
        }
        Ok(CodeSpec { field, n, k, t: (n - k) / 2 })
    }

    pub fn generator(&self) -> Vec<Gf> {
        let f = self.field.as_ref();
        let mut g = vec![Gf::ONE];
        for j in 0..(self.n - self.k) {
            let root = f.alpha_pow(j as i64);
            let mut next = vec![Gf::ZERO; g.len() + 1];
            for (i, &gi) in g.iter().enumerate() {
                next[i + 1] += gi;
                next[i] += f.mul(gi, root);
            }
            g = next;
        }
        g
    }
}

/// Systematic cyclic encoding: message in the high-order positions, parity
/// (remainder of x^(n-k) m(x) mod g) in the low-order ones.
pub fn encode(msg: &[Gf], code: &CodeSpec) -> Result<Vec<Gf>, CodeError> {
    if msg.len() != code.k {
        return Err(CodeError::LengthMismatch);
    }
    let f = code.field.as_ref();
    let g = code.generator();
    let p = code.n - code.k;
    let mut rem = vec![Gf::ZERO; p];
    for &m in msg.iter().rev() {
        let feedback = m + rem[p - 1];
        for i in (1..p).rev() {
            rem[i] = rem[i - 1] + f.mul(feedback, g[i]);
        }
        rem[0] = f.mul(feedback, g[0]);
    }
    let mut word = rem;
    word.extend_from_slice(msg);
    Ok(word)
}

/// Errata locator and evaluator produced by the key-equation step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrataState {
    /// tau(x), tau(0) = 1, degree <= 2t.
    pub tau: Vec<Gf>,
    /// A(x) = S(x) tau(x) mod x^(2t).
    pub evaluator: Vec<Gf>,
    pub erasure_positions: Vec<usize>,
}

impl ErrataState {
    pub fn tau_degree(&self) -> usize {
        self.tau.iter().rposition(|g| !g.is_zero()).unwrap_or(0)
    }

    /// Even-index coefficient half: tau(x) = te(x^2) + x to(x^2).
    pub fn tau_even(&self) -> Vec<Gf> {
        self.tau.iter().step_by(2).copied().collect()
    }

    pub fn tau_odd(&self) -> Vec<Gf> {
        self.tau.iter().skip(1).step_by(2).copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    TooManyErasures,
    /// Locator degree and root count disagree: uncorrectable pattern.
    CountMismatch,
    /// Derivative vanished at a claimed root.
    ForneyZeroDerivative,
    /// Corrected word failed the final syndrome check.
    Uncorrectable,
    PlanMismatch,
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::TooManyErasures => write!(f, "more erasures than redundancy"),
            DecodeError::CountMismatch => write!(f, "locator roots do not match its degree"),
            DecodeError::ForneyZeroDerivative => write!(f, "zero derivative at claimed root"),
            DecodeError::Uncorrectable => write!(f, "pattern outside decoding radius"),
            DecodeError::PlanMismatch => write!(f, "plan does not fit this code"),
        }
    }
}

impl std::error::Error for DecodeError {}

/// Which evaluation route the combined search uses for x to(x^2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ChienOption {
    Direct = 1,
    HalfThenScale = 2,
}

/// Returns the cheaper option under the weighted total metric; ties go to
/// the direct route.
pub fn select_option(direct: &CostReport, half_then_scale: &CostReport) -> ChienOption {
    if half_then_scale.total < direct.total {
        ChienOption::HalfThenScale
    } else {
        ChienOption::Direct
    }
}

/// The transform plans a decoder needs, built once per code.
pub struct DecoderPlans {
    /// Spectral keep 0..2t-1 on the symmetric variant (step T.1/t.1).
    pub syndrome: ReducedPlan,
    /// Full direct-variant plan used as the inverse transform (step T.4).
    pub inverse_full: CfftPlan,
    /// Temporal support 0..2t-1 (errata evaluator).
    pub a_eval: ReducedPlan,
    /// Temporal support 0..t (even locator half, evaluated at x then squared
    /// by output permutation).
    pub tau_even: ReducedPlan,
    /// Temporal support on the odd positions 1, 3, .., 2t-1 (option 1).
    pub tau_odd_direct: ReducedPlan,
    /// Temporal support 0..t-1 (option 2, plus n scaling multiplications).
    pub tau_odd_half: ReducedPlan,
}

impl DecoderPlans {
    pub fn build(code: &CodeSpec) -> Result<DecoderPlans, crate::bilinear::BilinearError> {
        let f = &code.field;
        let two_t = 2 * code.t;
        let build_partial = |sup: SupportSpec| -> Result<ReducedPlan, crate::bilinear::BilinearError> {
            let cs = search_rotation(f, &sup, PlanVariant::Scfft);
            let plan = build_full_cfft(f, &cs, PlanVariant::Scfft)?;
            Ok(reduce_partial(&plan, &sup).expect("valid spectral support"))
        };
        let build_dual = |sup: SupportSpec| -> Result<ReducedPlan, crate::bilinear::BilinearError> {
            let cs = search_rotation(f, &sup, PlanVariant::Dcfft);
            let plan = build_full_cfft(f, &cs, PlanVariant::Dcfft)?;
            Ok(reduce_dual_partial(&plan, &sup).expect("valid temporal support"))
        };
        Ok(DecoderPlans {
            syndrome: build_partial(SupportSpec::spectral(0..two_t))?,
            inverse_full: build_full_cfft(f, &crate::cyclotomic::compute_cosets(f.n()), PlanVariant::Dcfft)?,
            a_eval: build_dual(SupportSpec::temporal(0..two_t))?,
            tau_even: build_dual(SupportSpec::temporal(0..=code.t))?,
            tau_odd_direct: build_dual(SupportSpec::temporal((1..two_t).step_by(2)))?,
            tau_odd_half: build_dual(SupportSpec::temporal(0..code.t))?,
        })
    }
}

/// Decode outcome: corrected codeword unless the failure flag fired, the
/// errata found, and per-stage operation tallies.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    pub codeword: Option<Vec<Gf>>,
    pub errata: Vec<(usize, Gf)>,
    pub failure: Option<DecodeError>,
    pub stage_costs: Vec<(String, CostReport)>,
}

impl DecodeResult {
    fn failed(err: DecodeError, stage_costs: Vec<(String, CostReport)>) -> DecodeResult {
        DecodeResult { codeword: None, errata: Vec::new(), failure: Some(err), stage_costs }
    }
}

pub struct RsDecoder {
    pub code: CodeSpec,
    pub plans: DecoderPlans,
    pub option: ChienOption,
}

impl RsDecoder {
    pub fn new(code: CodeSpec) -> Result<RsDecoder, crate::bilinear::BilinearError> {
        let plans = DecoderPlans::build(&code)?;
        let m = code.field.m();
        let n = code.n;
        // popcount-based static costs decide the evaluation route
        let cost = |rp: &ReducedPlan, extra_mults: usize| {
            CostReport::new(m, rp.base.mult_count() + extra_mults, rp.base.naive_add_count(), 0)
        };
        let option = select_option(
            &cost(&plans.tau_odd_direct, 0),
            &cost(&plans.tau_odd_half, n),
        );
        Ok(RsDecoder { code, plans, option })
    }

    /// Syndromes S_0 .. S_(2t-1) through the partial plan.
    pub fn syndromes(&self, received: &[Gf]) -> Result<Vec<Gf>, DecodeError> {
        if received.len() != self.code.n {
            return Err(DecodeError::PlanMismatch);
        }
        let (out, _) = evaluate_plan(&self.plans.syndrome.base, received)
            .map_err(|_| DecodeError::PlanMismatch)?;
        Ok((0..2 * self.code.t).map(|i| out[i]).collect())
    }

    /// Inversionless key-equation solver seeded with the erasure locator.
    pub fn bma_inversionless(
        &self,
        syndromes: &[Gf],
        erasures: &[usize],
    ) -> Result<ErrataState, DecodeError> {
        let f = self.code.field.as_ref();
        let two_t = 2 * self.code.t;
        let mu = erasures.len();
        if mu > two_t {
            return Err(DecodeError::TooManyErasures);
        }
        // erasure locator, tau(0) = 1
        let mut lambda = vec![Gf::ZERO; two_t + 1];
        lambda[0] = Gf::ONE;
        let mut deg = 0usize;
        for &pos in erasures {
            let x = f.alpha_pow(pos as i64);
            for i in (0..=deg).rev() {
                let scaled = f.mul(lambda[i], x);
                lambda[i + 1] += scaled;
            }
            deg += 1;
        }
        let mut b = lambda.clone();
        let mut b_shift = 1usize; // b is implicitly multiplied by x^b_shift
        let mut gamma = Gf::ONE;
        let mut l = 0usize;
        for r in mu..two_t {
            let mut delta = Gf::ZERO;
            for i in 0..=deg.min(r) {
                delta += f.mul(lambda[i], syndromes[r - i]);
            }
            // new lambda = gamma*lambda + delta * x^b_shift * b
            let mut next = vec![Gf::ZERO; two_t + 1];
            for i in 0..=deg {
                next[i] = f.mul(gamma, lambda[i]);
            }
            if !delta.is_zero() {
                for i in 0..=(two_t.saturating_sub(b_shift)) {
                    if i + b_shift <= two_t {
                        next[i + b_shift] += f.mul(delta, b[i]);
                    }
                }
            }
            if !delta.is_zero() && 2 * l <= r - mu {
                b = lambda;
                b_shift = 1;
                gamma = delta;
                l = r - mu + 1 - l;
            } else {
                b_shift += 1;
            }
            lambda = next;
            deg = lambda.iter().rposition(|g| !g.is_zero()).unwrap_or(0);
        }
        // normalize tau(0) = 1
        if lambda[0].is_zero() {
            return Err(DecodeError::CountMismatch);
        }
        let inv0 = f.inv(lambda[0]).expect("nonzero");
        for g in lambda.iter_mut() {
            *g = f.mul(*g, inv0);
        }
        let deg = lambda.iter().rposition(|g| !g.is_zero()).unwrap_or(0);
        lambda.truncate(deg + 1);
        // evaluator A = S * tau mod x^(2t)
        let mut a = vec![Gf::ZERO; two_t];
        for (i, &ti) in lambda.iter().enumerate() {
            if ti.is_zero() {
                continue;
            }
            for (j, &sj) in syndromes.iter().enumerate() {
                if i + j < two_t {
                    a[i + j] += f.mul(ti, sj);
                }
            }
        }
        while a.last().is_some_and(|g| g.is_zero()) {
            a.pop();
        }
        Ok(ErrataState {
            tau: lambda,
            evaluator: a,
            erasure_positions: erasures.to_vec(),
        })
    }

    /// Extends 2t syndromes to all n using the locator's linear recurrence.
    pub fn recursive_extend(&self, syndromes: &[Gf], tau: &[Gf]) -> Vec<Gf> {
        let f = self.code.field.as_ref();
        let n = self.code.n;
        let mut s = Vec::with_capacity(n);
        s.extend_from_slice(syndromes);
        let deg = tau.iter().rposition(|g| !g.is_zero()).unwrap_or(0);
        for j in s.len()..n {
            let mut v = Gf::ZERO;
            for i in 1..=deg {
                v += f.mul(tau[i], s[j - i]);
            }
            s.push(v);
        }
        s
    }

    fn eval_dual(&self, plan: &ReducedPlan, poly: &[Gf]) -> Vec<Gf> {
        let mut padded = vec![Gf::ZERO; self.code.n];
        for (i, &c) in poly.iter().enumerate() {
            padded[i] = c;
        }
        let (out, _) = evaluate_plan(&plan.base, &padded).expect("length fixed");
        out
    }

    /// Joint root scan and errata evaluation over all n points.
    ///
    /// Returns (position, value) pairs. Root positions come from comparing
    /// the even and odd locator halves; values from the evaluator and the
    /// derivative identity to(x^2) = tau'(x).
    pub fn chien_forney_combined(
        &self,
        state: &ErrataState,
        option: ChienOption,
    ) -> Result<Vec<(usize, Gf)>, DecodeError> {
        let f = self.code.field.as_ref();
        let n = self.code.n;
        let deg = state.tau_degree();
        if deg == 0 {
            return Ok(Vec::new());
        }

        let a_vals = self.eval_dual(&self.plans.a_eval, &state.evaluator);

        // te(x^2) at alpha^i is te(x) at alpha^(2i)
        let te_raw = self.eval_dual(&self.plans.tau_even, &state.tau_even());
        let even_at = |i: usize| te_raw[(2 * i) % n];

        let odd_vals: Vec<Gf> = match option {
            ChienOption::Direct => {
                let mut padded = vec![Gf::ZERO; n];
                for (i, &c) in state.tau_odd().iter().enumerate() {
                    padded[2 * i + 1] = c;
                }
                let (out, _) =
                    evaluate_plan(&self.plans.tau_odd_direct.base, &padded).expect("length fixed");
                out
            }
            ChienOption::HalfThenScale => {
                let to_raw = self.eval_dual(&self.plans.tau_odd_half, &state.tau_odd());
                (0..n)
                    .map(|i| f.mul(f.alpha_pow(i as i64), to_raw[(2 * i) % n]))
                    .collect()
            }
        };

        let mut errata = Vec::new();
        for i in 0..n {
            // tau(alpha^i) = even + odd vanishes iff the halves agree
            if even_at(i) == odd_vals[i] {
                let j = (n - i) % n;
                let denom = odd_vals[i];
                if denom.is_zero() {
                    return Err(DecodeError::ForneyZeroDerivative);
                }
                let value = f.div(a_vals[i], denom).expect("nonzero denominator");
                errata.push((j, value));
            }
        }
        if errata.len() != deg {
            return Err(DecodeError::CountMismatch);
        }
        errata.sort_by_key(|&(j, _)| j);
        Ok(errata)
    }

    fn verify_corrected(&self, word: &[Gf]) -> bool {
        match self.syndromes(word) {
            Ok(s) => s.iter().all(|g| g.is_zero()),
            Err(_) => false,
        }
    }

    fn stage_costs_time(&self) -> Vec<(String, CostReport)> {
        let m = self.code.field.m();
        let n = self.code.n;
        let two_t = 2 * self.code.t;
        let plan_cost = |rp: &ReducedPlan| {
            CostReport::new(m, rp.base.mult_count(), rp.base.naive_add_count(), 0)
        };
        let odd = match self.option {
            ChienOption::Direct => plan_cost(&self.plans.tau_odd_direct),
            ChienOption::HalfThenScale => {
                let rp = &self.plans.tau_odd_half;
                CostReport::new(m, rp.base.mult_count() + n, rp.base.naive_add_count(), 0)
            }
        };
        vec![
            ("syndromes".into(), plan_cost(&self.plans.syndrome)),
            ("evaluator_eval".into(), plan_cost(&self.plans.a_eval)),
            ("locator_even_eval".into(), plan_cost(&self.plans.tau_even)),
            ("locator_odd_eval".into(), odd),
            ("misc".into(), CostReport::new(m, 0, n, two_t)),
        ]
    }

    fn stage_costs_transform(&self) -> Vec<(String, CostReport)> {
        let m = self.code.field.m();
        let n = self.code.n;
        let two_t = 2 * self.code.t;
        let plan_cost = |mult: usize, add: usize| CostReport::new(m, mult, add, 0);
        vec![
            (
                "syndromes".into(),
                plan_cost(
                    self.plans.syndrome.base.mult_count(),
                    self.plans.syndrome.base.naive_add_count(),
                ),
            ),
            (
                "extension".into(),
                plan_cost((n - two_t) * two_t, (n - two_t) * (two_t - 1)),
            ),
            (
                "inverse_transform".into(),
                plan_cost(
                    self.plans.inverse_full.mult_count(),
                    self.plans.inverse_full.naive_add_count(),
                ),
            ),
        ]
    }

    /// t.1-t.4: syndromes, key equation, evaluator, combined search.
    pub fn decode_time_domain(&self, received: &[Gf], erasures: &[usize]) -> DecodeResult {
        let costs = self.stage_costs_time();
        let syndromes = match self.syndromes(received) {
            Ok(s) => s,
            Err(e) => return DecodeResult::failed(e, costs),
        };
        let state = match self.bma_inversionless(&syndromes, erasures) {
            Ok(s) => s,
            Err(e) => return DecodeResult::failed(e, costs),
        };
        let errata = match self.chien_forney_combined(&state, self.option) {
            Ok(e) => e,
            Err(e) => return DecodeResult::failed(e, costs),
        };
        let mut word = received.to_vec();
        for &(pos, val) in &errata {
            word[pos] += val;
        }
        if !self.verify_corrected(&word) {
            return DecodeResult::failed(DecodeError::Uncorrectable, costs);
        }
        DecodeResult {
            codeword: Some(word),
            errata: errata.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
            failure: None,
            stage_costs: costs,
        }
    }

    /// T.1-T.4: syndromes, key equation, recursive extension, inverse
    /// transform of the full spectrum.
    pub fn decode_transform_domain(&self, received: &[Gf], erasures: &[usize]) -> DecodeResult {
        let costs = self.stage_costs_transform();
        let syndromes = match self.syndromes(received) {
            Ok(s) => s,
            Err(e) => return DecodeResult::failed(e, costs),
        };
        let state = match self.bma_inversionless(&syndromes, erasures) {
            Ok(s) => s,
            Err(e) => return DecodeResult::failed(e, costs),
        };
        let full = self.recursive_extend(&syndromes, &state.tau);
        // e_j = sum_i S_i alpha^(-ij): reuse the forward plan on the
        // index-reversed spectrum
        let n = self.code.n;
        let mut reversed = vec![Gf::ZERO; n];
        for (i, &s) in full.iter().enumerate() {
            reversed[(n - i) % n] = s;
        }
        let (error_vec, _) =
            evaluate_plan(&self.plans.inverse_full, &reversed).expect("length fixed");
        let mut word = received.to_vec();
        let mut errata = Vec::new();
        for (j, &e) in error_vec.iter().enumerate() {
            if !e.is_zero() {
                word[j] += e;
                errata.push((j, e));
            }
        }
        if !self.verify_corrected(&word) {
            return DecodeResult::failed(DecodeError::Uncorrectable, costs);
        }
        DecodeResult { codeword: Some(word), errata, failure: None, stage_costs: costs }
    }
}
