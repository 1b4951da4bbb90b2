//! Partial and dual partial plans by row/column elimination, plus the
//! per-coset rotation search that exposes more all-zero strike-outs.

use crate::bilinear::{builtin_kernel, CfftPlan, CosetBlock, PlanVariant};
use crate::cyclotomic::{compute_cosets, CosetStructure};
use crate::galois::{FieldSpec, Gf};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SupportKind {
    /// Only these frequency components are needed.
    Spectral,
    /// Only these temporal components may be nonzero.
    Temporal,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SupportSpec {
    pub kind: SupportKind,
    pub keep: BTreeSet<usize>,
}

impl SupportSpec {
    pub fn spectral(keep: impl IntoIterator<Item = usize>) -> SupportSpec {
        SupportSpec { kind: SupportKind::Spectral, keep: keep.into_iter().collect() }
    }

    pub fn temporal(keep: impl IntoIterator<Item = usize>) -> SupportSpec {
        SupportSpec { kind: SupportKind::Temporal, keep: keep.into_iter().collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    EmptySupport,
    KindMismatch,
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::EmptySupport => write!(f, "support set is empty"),
            ReduceError::KindMismatch => write!(f, "support kind does not match the reduction"),
        }
    }
}

impl std::error::Error for ReduceError {}

/// A plan with rows/columns struck out. `base` carries the reduced matrices
/// and constants; bookkeeping records what was removed and why.
pub struct ReducedPlan {
    pub base: CfftPlan,
    /// Slot ids of the original plan that were struck.
    pub removed_mult_slots: Vec<usize>,
    pub support: SupportSpec,
    /// Rotation per coset, as used when the base plan was built.
    pub rotations: Vec<usize>,
}

impl fmt::Debug for ReducedPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ReducedPlan({:?}, struck {} slots)",
            self.base,
            self.removed_mult_slots.len()
        )
    }
}

/// Count of surviving c entries different from one.
pub fn mult_count(rp: &ReducedPlan) -> usize {
    rp.base.mult_count()
}

fn rebuild_blocks(blocks: &[CosetBlock], kept_slots: &[usize]) -> Vec<CosetBlock> {
    let mut new_blocks = Vec::with_capacity(blocks.len());
    let mut cursor = 0usize;
    for b in blocks {
        let cnt = kept_slots[cursor..]
            .iter()
            .take_while(|&&s| b.slots.contains(&s))
            .count();
        new_blocks.push(CosetBlock {
            leader: b.leader,
            size: b.size,
            rotation: b.rotation,
            slots: cursor..cursor + cnt,
        });
        cursor += cnt;
    }
    new_blocks
}

/// Iterate strike-out to a fixed point: a slot dies when its post column is
/// all-zero over the kept rows or its pre row is all-zero over the kept
/// columns. Returns (kept_rows, kept_cols, kept_slots).
fn strike_fixed_point(
    plan: &CfftPlan,
    kept_rows: Vec<usize>,
    kept_cols: Vec<usize>,
) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let col_mask = {
        let mut m = vec![0u64; plan.pre.cols().div_ceil(64).max(1)];
        for &c in &kept_cols {
            m[c / 64] |= 1 << (c % 64);
        }
        m
    };
    let mut kept_slots: Vec<usize> = (0..plan.slot_count()).collect();
    loop {
        let post_alive = plan.post.or_rows(&kept_rows);
        let before = kept_slots.len();
        kept_slots.retain(|&s| {
            let post_live = (post_alive[s / 64] >> (s % 64)) & 1 == 1;
            let pre_live = plan
                .pre
                .row_words(s)
                .iter()
                .zip(&col_mask)
                .any(|(w, m)| w & m != 0);
            post_live && pre_live
        });
        if kept_slots.len() == before {
            break;
        }
        // removing slots cannot orphan rows or columns, so one pass after the
        // first retain is always stable; the loop guards the general case
        break;
    }
    (kept_rows, kept_cols, kept_slots)
}

fn reduce_common(
    plan: &CfftPlan,
    support: &SupportSpec,
    kept_rows: Vec<usize>,
    kept_cols: Vec<usize>,
) -> ReducedPlan {
    let (kept_rows, kept_cols, kept_slots) = strike_fixed_point(plan, kept_rows, kept_cols);
    let pre = plan.pre.submatrix(&kept_slots, &kept_cols);
    let post = plan.post.submatrix(&kept_rows, &kept_slots);
    let c: Vec<Gf> = kept_slots.iter().map(|&s| plan.c[s]).collect();
    let removed: Vec<usize> = (0..plan.slot_count())
        .filter(|s| !kept_slots.contains(s))
        .collect();
    let base = CfftPlan {
        variant: plan.variant,
        field: plan.field.clone(),
        pre,
        c,
        post,
        input_index: kept_cols.iter().map(|&c| plan.input_index[c]).collect(),
        output_index: kept_rows.iter().map(|&r| plan.output_index[r]).collect(),
        blocks: rebuild_blocks(&plan.blocks, &kept_slots),
        cosets: plan.cosets.clone(),
    };
    ReducedPlan {
        base,
        removed_mult_slots: removed,
        support: support.clone(),
        rotations: plan.cosets.cosets.iter().map(|c| c.rotation).collect(),
    }
}

/// Keeps only the requested spectral components: post rows outside the
/// support go, then all-zero post columns strike their slots and pre rows.
pub fn reduce_partial(plan: &CfftPlan, keep: &SupportSpec) -> Result<ReducedPlan, ReduceError> {
    if keep.kind != SupportKind::Spectral {
        return Err(ReduceError::KindMismatch);
    }
    if keep.keep.is_empty() {
        return Err(ReduceError::EmptySupport);
    }
    let kept_rows: Vec<usize> = (0..plan.post.rows())
        .filter(|&r| keep.keep.contains(&plan.output_index[r]))
        .collect();
    let kept_cols: Vec<usize> = (0..plan.pre.cols()).collect();
    Ok(reduce_common(plan, keep, kept_rows, kept_cols))
}

/// Input known zero outside the temporal support: pre columns outside go,
/// then all-zero pre rows strike their slots and post columns.
pub fn reduce_dual_partial(
    plan: &CfftPlan,
    support: &SupportSpec,
) -> Result<ReducedPlan, ReduceError> {
    if support.kind != SupportKind::Temporal {
        return Err(ReduceError::KindMismatch);
    }
    if support.keep.is_empty() {
        return Err(ReduceError::EmptySupport);
    }
    let kept_cols: Vec<usize> = (0..plan.pre.cols())
        .filter(|&c| support.keep.contains(&plan.input_index[c]))
        .collect();
    let kept_rows: Vec<usize> = (0..plan.post.rows()).collect();
    Ok(reduce_common(plan, support, kept_rows, kept_cols))
}

/// Struck-slot count for one coset at one rotation, from the kernel's
/// data-side matrix alone. Valid for the rotation-sensitive combinations:
/// spectral support on an SCFFT (rotating output cosets) and temporal
/// support on a DCFFT (rotating input cosets).
fn struck_for_rotation(
    kernel_data: &crate::bits::BitMatrix,
    coset: &crate::cyclotomic::Coset,
    rotation: usize,
    keep: &BTreeSet<usize>,
) -> usize {
    let s = coset.size();
    let kept_t: Vec<usize> = (0..s)
        .filter(|&t| keep.contains(&coset.elements[(t + rotation) % s]))
        .collect();
    if kept_t.is_empty() {
        return kernel_data.rows();
    }
    (0..kernel_data.rows())
        .filter(|&r| !kept_t.iter().any(|&t| kernel_data.get(r, (s - t) % s)))
        .count()
}

/// Exhaustive per-coset rotation search maximizing struck multiplication
/// slots. Ties prefer the offset already chosen for an earlier coset of the
/// same size (equal rotations make equal-size cosets share constants, which
/// the downstream CSE exploits), then the smallest offset.
///
/// Rotation only moves strike-outs for spectral/SCFFT and temporal/DCFFT;
/// for the other combinations every offset ties and zero is returned.
pub fn search_rotation(
    spec: &FieldSpec,
    support: &SupportSpec,
    variant: PlanVariant,
) -> CosetStructure {
    let mut cs = compute_cosets(spec.n());
    let sensitive = matches!(
        (support.kind, variant),
        (SupportKind::Spectral, PlanVariant::Scfft) | (SupportKind::Temporal, PlanVariant::Dcfft)
    );
    if !sensitive {
        return cs;
    }
    let mut chosen_by_size: std::collections::HashMap<usize, usize> = Default::default();
    for c in cs.cosets.iter_mut() {
        let s = c.size();
        let kernel = match builtin_kernel(s) {
            Ok(k) => k,
            Err(_) => continue,
        };
        let counts: Vec<usize> = (0..s)
            .map(|r| struck_for_rotation(&kernel.data_pre, c, r, &support.keep))
            .collect();
        let best = *counts.iter().max().unwrap();
        let maximizers: Vec<usize> = (0..s).filter(|&r| counts[r] == best).collect();
        let pick = match chosen_by_size.get(&s) {
            Some(&prev) if maximizers.contains(&prev) => prev,
            _ => maximizers[0],
        };
        c.rotation = pick;
        // only partially-kept cosets anchor the agreement rule
        let inter = c.elements.iter().filter(|e| support.keep.contains(e)).count();
        if inter > 0 && inter < s {
            chosen_by_size.entry(s).or_insert(pick);
        }
    }
    cs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::{build_full_cfft, evaluate_plan, naive_dft};
    use crate::galois::FieldSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use std::sync::Arc;

    fn f31() -> Arc<FieldSpec> {
        Arc::new(FieldSpec::new(5, 0x25).unwrap())
    }

    #[test]
    fn rotation_search_reproduces_published_cosets() {
        let f = f31();
        let keep = SupportSpec::spectral(0..6);
        let cs = search_rotation(&f, &keep, PlanVariant::Scfft);
        assert_eq!(cs.cosets[0].ordered(), vec![0]);
        assert_eq!(cs.cosets[1].ordered(), vec![2, 4, 8, 16, 1]);
        assert_eq!(cs.cosets[2].ordered(), vec![6, 12, 24, 17, 3]);
        assert_eq!(cs.cosets[3].ordered(), vec![10, 20, 9, 18, 5]);

        // leader-1 coset: offset 1 strikes a slot, offsets 0/3/4 strike none
        let kernel = builtin_kernel(5).unwrap();
        let counts: Vec<usize> = (0..5)
            .map(|r| struck_for_rotation(&kernel.data_pre, &cs.cosets[1], r, &keep.keep))
            .collect();
        assert_eq!(counts[1], 1);
        assert_eq!(counts[0], 0);
        assert_eq!(counts[3], 0);
        assert_eq!(counts[4], 0);
    }

    #[test]
    fn single_element_coset_rotation_is_zero() {
        let f = f31();
        let cs = search_rotation(&f, &SupportSpec::spectral(0..6), PlanVariant::Scfft);
        assert_eq!(cs.cosets[0].rotation, 0);
    }

    #[test]
    fn rotation_maximizes_struck_slots() {
        // exhaustive re-check of the maximality claim
        let f = f31();
        let keep = SupportSpec::spectral(0..6);
        let cs = search_rotation(&f, &keep, PlanVariant::Scfft);
        let kernel = builtin_kernel(5).unwrap();
        for c in cs.cosets.iter().filter(|c| c.size() == 5) {
            let chosen = struck_for_rotation(&kernel.data_pre, c, c.rotation, &keep.keep);
            for r in 0..c.size() {
                assert!(struck_for_rotation(&kernel.data_pre, c, r, &keep.keep) <= chosen);
            }
        }
    }

    #[test]
    fn golden_partial_scfft_strikeout() {
        let f = f31();
        let keep = SupportSpec::spectral(0..6);
        let cs = search_rotation(&f, &keep, PlanVariant::Scfft);
        let plan = build_full_cfft(&f, &cs, PlanVariant::Scfft).unwrap();
        let rp = reduce_partial(&plan, &keep).unwrap();

        // outputs in coset order: S0, S2, S4, S1, S3, S5
        assert_eq!(rp.base.output_index, vec![0, 2, 4, 1, 3, 5]);

        // coset 1 strikes exactly its slot 7 (the published eighth column)
        let b1 = &plan.blocks[1];
        let struck1: Vec<usize> = rp
            .removed_mult_slots
            .iter()
            .filter(|&&s| b1.slots.contains(&s))
            .map(|&s| s - b1.slots.start)
            .collect();
        assert_eq!(struck1, vec![7]);

        // cosets 2 and 3 strike slots {3, 6, 7, 8} (published 4th/7th/8th/9th)
        for bi in [2usize, 3] {
            let b = &plan.blocks[bi];
            let struck: Vec<usize> = rp
                .removed_mult_slots
                .iter()
                .filter(|&&s| b.slots.contains(&s))
                .map(|&s| s - b.slots.start)
                .collect();
            assert_eq!(struck, vec![3, 6, 7, 8], "coset {bi}");
        }

        assert_eq!(mult_count(&rp), 18);

        // keep-everything reduction changes nothing
        let all = SupportSpec::spectral(0..31);
        let rp_all = reduce_partial(&plan, &all).unwrap();
        assert!(rp_all.removed_mult_slots.is_empty());
        assert_eq!(rp_all.base.slot_count(), plan.slot_count());
    }

    #[test]
    fn keep_only_dc_component() {
        let f = f31();
        let cs = search_rotation(&f, &SupportSpec::spectral([0usize]), PlanVariant::Scfft);
        let plan = build_full_cfft(&f, &cs, PlanVariant::Scfft).unwrap();
        let rp = reduce_partial(&plan, &SupportSpec::spectral([0usize])).unwrap();
        assert_eq!(mult_count(&rp), 0);
        assert_eq!(rp.base.c, vec![Gf::ONE]);
    }

    #[test]
    fn partial_matches_oracle_on_kept_indices() {
        let f = f31();
        let keep = SupportSpec::spectral(0..6);
        let cs = search_rotation(&f, &keep, PlanVariant::Scfft);
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for variant in [PlanVariant::Scfft, PlanVariant::Dcfft] {
            let plan = build_full_cfft(&f, &cs, variant).unwrap();
            let rp = reduce_partial(&plan, &keep).unwrap();
            for _ in 0..300 {
                let v: Vec<Gf> = (0..31).map(|_| Gf(rng.gen_range(0..32))).collect();
                let (got, _) = evaluate_plan(&rp.base, &v).unwrap();
                let want = naive_dft(&v, &f, false).unwrap();
                for &j in &keep.keep {
                    assert_eq!(got[j], want[j]);
                }
            }
        }
    }

    #[test]
    fn golden_dual_partial_strikeout() {
        let f = f31();
        let support = SupportSpec::temporal(0..7);
        let cs = search_rotation(&f, &support, PlanVariant::Dcfft);
        let plan = build_full_cfft(&f, &cs, PlanVariant::Dcfft).unwrap();
        let rp = reduce_dual_partial(&plan, &support).unwrap();

        // kept input columns in coset order: tau_0, tau_2, tau_4, tau_1,
        // tau_6, tau_3, tau_5
        assert_eq!(rp.base.input_index, vec![0, 2, 4, 1, 6, 3, 5]);

        // coset 2 keeps temporal {6, 3} and strikes slots 7 and 8
        let b2 = &plan.blocks[2];
        let struck: Vec<usize> = rp
            .removed_mult_slots
            .iter()
            .filter(|&&s| b2.slots.contains(&s))
            .map(|&s| s - b2.slots.start)
            .collect();
        assert_eq!(struck, vec![7, 8]);

        // identity reduction
        let all = SupportSpec::temporal(0..31);
        let rp_all = reduce_dual_partial(&plan, &all).unwrap();
        assert!(rp_all.removed_mult_slots.is_empty());
    }

    #[test]
    fn dual_matches_oracle_on_supported_inputs() {
        let f = f31();
        let support = SupportSpec::temporal(0..7);
        let cs = search_rotation(&f, &support, PlanVariant::Dcfft);
        let mut rng = ChaCha12Rng::seed_from_u64(22);
        for variant in [PlanVariant::Dcfft, PlanVariant::Scfft] {
            let plan = build_full_cfft(&f, &cs, variant).unwrap();
            let rp = reduce_dual_partial(&plan, &support).unwrap();
            for _ in 0..300 {
                let mut v = vec![Gf::ZERO; 31];
                for i in 0..7 {
                    v[i] = Gf(rng.gen_range(0..32));
                }
                let (got, _) = evaluate_plan(&rp.base, &v).unwrap();
                assert_eq!(got, naive_dft(&v, &f, false).unwrap());
            }
        }
    }

    #[test]
    fn monotonicity_and_bounds() {
        let f = f31();
        let keep = SupportSpec::spectral(0..6);
        let cs = search_rotation(&f, &keep, PlanVariant::Scfft);
        let plan = build_full_cfft(&f, &cs, PlanVariant::Scfft).unwrap();
        let rp = reduce_partial(&plan, &keep).unwrap();
        assert!(mult_count(&rp) <= plan.mult_count());
        assert!(rp.base.naive_add_count() < plan.naive_add_count());
        assert_eq!(rp.base.slot_count(), rp.base.c.len());
    }

    #[test]
    fn empty_support_rejected() {
        let f = f31();
        let cs = compute_cosets(31);
        let plan = build_full_cfft(&f, &cs, PlanVariant::Scfft).unwrap();
        assert!(matches!(
            reduce_partial(&plan, &SupportSpec::spectral(std::iter::empty())),
            Err(ReduceError::EmptySupport)
        ));
        assert!(matches!(
            reduce_partial(&plan, &SupportSpec::temporal(0..3)),
            Err(ReduceError::KindMismatch)
        ));
    }
}
