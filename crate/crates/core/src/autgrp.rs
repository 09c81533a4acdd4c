//! The subgroups `U`, `V`, `W` of `F_p^×` and the automorphism structure
//! report, plus construction and verification of normalizing elements whose
//! labels are multiplications.
//!
//! `U` is the stabilizer of the row space of `E` under the index
//! permutations, `V` the part of `U` acting on `E` by one scalar, and `W`
//! the subgroup generated by the attained scalars. An element of the
//! diagonal closure of the rooted multiplications is a sequence
//! `g = Π κ_i(x ↦ d_i·x)`; it normalizes the group exactly when all the
//! induced maps `n ↦ d_{k+1}·(n P_{d_k^{-1}})` agree on `E`, which pins the
//! whole sequence once `d_0` and the first ratio are chosen.

use crate::error::{Error, Result};
use crate::fpalg::{
    inv_mod, mul_mod, perm_apply, row_space_equal, scalar_action, unit_subgroup_generated, FpVec,
    Unit,
};
use crate::group::{Classification, MggsGroup};
use crate::tree::{kappa, rooted, AffineLabel, Portrait};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// All units `u` with `E·P_u = E` as a row space. Sorted; contains 1, and
/// contains `-1` whenever the group is symmetric.
pub fn compute_u(group: &MggsGroup) -> Result<Vec<u64>> {
    if group.classification() == Classification::Constant {
        return Err(Error::ConstantUnsupported);
    }
    let p = group.p();
    let e = group.matrix();
    let mut out = Vec::new();
    for u in 1..p {
        let unit = Unit::new(u as i64, p)?;
        if row_space_equal(e, &e.perm_apply_rows(unit)?)? {
            out.push(u);
        }
    }
    Ok(out)
}

/// The subset of `U` acting on `E` by a single scalar, with the scalar of
/// each member recorded.
pub fn compute_v(group: &MggsGroup, u: &[u64]) -> Result<(Vec<u64>, BTreeMap<u64, u64>)> {
    let p = group.p();
    let mut v = Vec::new();
    let mut scalars = BTreeMap::new();
    for &cand in u {
        let unit = Unit::new(cand as i64, p)?;
        if let Some(lambda) = scalar_action(group.matrix(), unit)? {
            v.push(cand);
            scalars.insert(cand, lambda.value());
        }
    }
    Ok((v, scalars))
}

/// The subgroup of `F_p^×` generated by all attained scalars.
pub fn compute_w(scalars: &BTreeMap<u64, u64>, p: u64) -> Vec<u64> {
    let gens: Vec<u64> = scalars.values().copied().collect();
    unit_subgroup_generated(p, &gens)
}

/// The assembled automorphism-group report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutReport {
    pub classification: Classification,
    #[serde(rename = "U")]
    pub u: Vec<u64>,
    #[serde(rename = "V")]
    pub v: Vec<u64>,
    #[serde(rename = "W")]
    pub w: Vec<u64>,
    pub scalars: BTreeMap<u64, u64>,
    pub structure: String,
    pub out_finite: bool,
    pub coprime_autos: bool,
    pub orders: Orders,
    /// Set for symmetric groups: the reflection `-1` lies in `U` but fixes
    /// `E` pointwise, so its attained scalar is 1 and it contributes
    /// nothing to `W`.
    pub reflection_scalar_trivial: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    #[serde(rename = "U")]
    pub u: usize,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "W")]
    pub w: usize,
}

fn uw_factor(u_order: usize, w_order: usize) -> Option<String> {
    match (u_order, w_order) {
        (1, 1) => None,
        (n, 1) | (1, n) => Some(format!("C_{n}")),
        (2, 2) => Some("C_2²".to_string()),
        (a, b) if a == b => Some(format!("(C_{a})²")),
        (a, b) => Some(format!("(C_{a} × C_{b})")),
    }
}

fn structure_string(class: Classification, p: u64, u_order: usize, w_order: usize) -> String {
    let uw = uw_factor(u_order, w_order);
    match class {
        Classification::Symmetric => {
            let uw = uw.expect("symmetric groups have -1 in U");
            format!("(G ⋊ C_{p}) ⋊ {uw}")
        }
        Classification::Regular => match uw {
            Some(uw) => format!("(G ⋊ ∏_ω C_{p}) ⋊ {uw}"),
            None => format!("G ⋊ ∏_ω C_{p}"),
        },
        Classification::Constant => unreachable!("rejected before rendering"),
    }
}

/// Computes `U`, `V`, `W` and assembles the structure report.
pub fn aut_structure(group: &MggsGroup) -> Result<AutReport> {
    let class = group.classification();
    if class == Classification::Constant {
        return Err(Error::ConstantUnsupported);
    }
    let p = group.p();
    let u = compute_u(group)?;
    let (v, scalars) = compute_v(group, &u)?;
    let w = compute_w(&scalars, p);
    let structure = structure_string(class, p, u.len(), w.len());
    let reflection_scalar_trivial =
        class == Classification::Symmetric && scalars.get(&(p - 1)) == Some(&1);
    let note = reflection_scalar_trivial.then(|| {
        "symmetric space: the reflection -1 fixes E pointwise, so its scalar is 1 and it does \
         not enlarge W"
            .to_string()
    });
    let coprime_autos = u.len() > 1 || w.len() > 1;
    Ok(AutReport {
        classification: class,
        orders: Orders {
            u: u.len(),
            v: v.len(),
            w: w.len(),
        },
        u,
        v,
        w,
        scalars,
        structure,
        out_finite: class == Classification::Symmetric,
        coprime_autos,
        reflection_scalar_trivial,
        note,
    })
}

/// An eventually periodic sequence of units `d_0, d_1, …` defining the
/// element `Π κ_i(x ↦ d_i·x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizerSequence {
    p: u64,
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

impl NormalizerSequence {
    /// Builds a sequence from explicit values without any normalization
    /// checks; useful for probing non-normalizing sequences.
    pub fn from_values(p: u64, preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Precondition("period must be nonempty".into()));
        }
        for &d in preperiod.iter().chain(&period) {
            if d == 0 || d >= p {
                return Err(Error::ZeroUnit);
            }
        }
        Ok(Self {
            p,
            preperiod,
            period,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    /// The k-th value of the sequence.
    pub fn get(&self, k: usize) -> u64 {
        if k < self.preperiod.len() {
            self.preperiod[k]
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Portrait of `Π_{i < depth} κ_i(x ↦ d_i·x)` at the given depth.
    pub fn portrait(&self, depth: usize) -> Portrait {
        let mut acc = Portrait::identity(self.p, depth);
        for i in 0..depth {
            let factor = kappa(
                i,
                &rooted(self.p, depth - i, AffineLabel::scaling(self.get(i))),
            );
            acc = acc.compose(&factor).expect("same modulus");
        }
        acc
    }
}

/// Constructs the normalizing sequence with `d_0 ∈ U` and first ratio
/// `d_1/d_0 = w ∈ W`, solving `d_{k+1}·(v P_{d_k^{-1}}) = d_1·(v P_{d_0^{-1}})`
/// on the basis rows of `E` step by step. The solution at each step is
/// unique; a failure to solve is an internal-consistency error.
pub fn normalizer_sequence(group: &MggsGroup, d0: Unit, w: Unit) -> Result<NormalizerSequence> {
    let p = group.p();
    let u_set = compute_u(group)?;
    if !u_set.contains(&d0.value()) {
        return Err(Error::Domain {
            what: format!("d0 = {}", d0.value()),
            set: "U".into(),
        });
    }
    let (_, scalars) = compute_v(group, &u_set)?;
    let w_set = compute_w(&scalars, p);
    if !w_set.contains(&w.value()) {
        return Err(Error::Domain {
            what: format!("w = {}", w.value()),
            set: "W".into(),
        });
    }
    let m0 = d0.value();
    let m1 = mul_mod(m0, w.value(), p);
    // Images of the basis rows under the level-0/1 map fix the target.
    let rows = group.matrix().rows();
    let target: Vec<FpVec> = rows
        .iter()
        .map(|row| {
            perm_apply(row, Unit::new(inv_mod(m0, p).unwrap() as i64, p)?).map(|img| img.scale(m1))
        })
        .collect::<Result<Vec<_>>>()?;
    let step = |mk: u64| -> Result<u64> {
        let inv = Unit::new(inv_mod(mk, p).unwrap() as i64, p)?;
        let mut solution = None;
        'cand: for m in 1..p {
            for (row, want) in rows.iter().zip(&target) {
                if perm_apply(row, inv)?.scale(m) != *want {
                    continue 'cand;
                }
            }
            if solution.replace(m).is_some() {
                return Err(Error::Internal(format!(
                    "two solutions at step from d_k = {mk}"
                )));
            }
        }
        solution.ok_or_else(|| Error::Internal(format!("no solution at step from d_k = {mk}")))
    };
    let mut seq = vec![m0];
    let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
    seen.insert(m0, 0);
    let mut cur = m0;
    loop {
        let next = step(cur)?;
        if seq.len() == 1 && next != m1 {
            return Err(Error::Internal(format!(
                "solver produced d_1 = {next}, expected {m1}"
            )));
        }
        if let Some(&first) = seen.get(&next) {
            let preperiod = seq[..first].to_vec();
            let period = seq[first..].to_vec();
            return NormalizerSequence::from_values(p, preperiod, period);
        }
        seen.insert(next, seq.len());
        seq.push(next);
        cur = next;
    }
}

/// Outcome of a normalizer conjugation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizerCheck {
    pub passed: bool,
    pub witness: Option<String>,
}

impl NormalizerCheck {
    fn pass() -> Self {
        Self {
            passed: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        Self {
            passed: false,
            witness: Some(witness),
        }
    }
}

/// Verifies the conjugation action of a sequence portrait at the given
/// depth.
///
/// For every standard basis generator of the full-space group the conjugate
/// must carry the exponent vector `d_1 · s_{d_0·j}` at the first level, and
/// for every basis generator of `group` itself the conjugate must be the
/// directed element of its own first-level exponent vector, with that vector
/// inside the row space of `E`.
pub fn normalizer_conjugation_check(
    seq: &NormalizerSequence,
    group: &MggsGroup,
    depth: usize,
) -> Result<NormalizerCheck> {
    if depth < 2 {
        return Err(Error::Precondition(
            "conjugation check needs depth >= 2".into(),
        ));
    }
    let p = group.p();
    let g = seq.portrait(depth);
    let ambient = MggsGroup::full_space(p)?;
    let m0 = seq.get(0);
    let m1 = seq.get(1);
    // Ambient full-space generators: the level-1 action is exact.
    for j in 1..p {
        let mut basis = vec![0i64; (p - 1) as usize];
        basis[(j - 1) as usize] = 1;
        let bj = ambient.b_portrait(&FpVec::new(p, basis), depth)?;
        let conj = bj.conjugate(&g)?;
        let got = level_exponents(&conj, 1)?;
        let mut expect = vec![0i64; (p - 1) as usize];
        expect[(mul_mod(m0, j, p) - 1) as usize] = m1 as i64;
        if got != FpVec::new(p, expect) {
            return Ok(NormalizerCheck::fail(format!(
                "ambient generator {j}: level-1 exponents {:?}",
                got.entries()
            )));
        }
    }
    // The group's own generators: conjugates must be directed elements with
    // all level vectors in the row space.
    for ji in 0..group.rank() {
        let mut coords = vec![0i64; group.rank()];
        coords[ji] = 1;
        let bj = group.b_portrait(&FpVec::new(p, coords), depth)?;
        let conj = bj.conjugate(&g)?;
        let x1 = level_exponents(&conj, 1)?;
        if !group.matrix().contains_in_row_space(&x1)? {
            return Ok(NormalizerCheck::fail(format!(
                "generator b_{}: level-1 vector {:?} outside the row space",
                ji + 1,
                x1.entries()
            )));
        }
        let expected = ambient.b_portrait(&x1, depth)?;
        if conj != expected {
            // Locate the first deviating level for the witness.
            for level in 2..depth {
                let xl = level_exponents(&conj, level)?;
                if xl != x1 {
                    return Ok(NormalizerCheck::fail(format!(
                        "generator b_{}: level-{level} vector {:?} differs from level-1 \
                         vector {:?}",
                        ji + 1,
                        xl.entries(),
                        x1.entries()
                    )));
                }
            }
            return Ok(NormalizerCheck::fail(format!(
                "generator b_{}: conjugate is not the directed element of {:?}",
                ji + 1,
                x1.entries()
            )));
        }
    }
    Ok(NormalizerCheck::pass())
}

/// Exponent vector read from the labels at the vertices `0^{level-1}·k`,
/// `k = 1, …, p-1`. Labels there must be plain shifts.
fn level_exponents(g: &Portrait, level: usize) -> Result<FpVec> {
    let p = g.p();
    let mut spine = vec![0u64; level - 1];
    let mut out = Vec::with_capacity((p - 1) as usize);
    for k in 1..p {
        spine.push(k);
        let l = g.label(&spine)?;
        spine.pop();
        if l.u != 1 {
            return Err(Error::Internal(format!(
                "label at spine level {level} has a multiplicative part"
            )));
        }
        out.push(l.t);
    }
    Ok(FpVec::from_raw(p, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpalg::FpVec;

    fn sym5() -> MggsGroup {
        MggsGroup::new(5, vec![FpVec::new(5, [1, 2, 2, 1])]).unwrap()
    }

    fn ex2(p: u64) -> MggsGroup {
        MggsGroup::new(p, vec![FpVec::new(p, (1..p as i64).collect::<Vec<_>>())]).unwrap()
    }

    fn ex3() -> MggsGroup {
        let b1 = FpVec::new(13, [1, 2, 11, 3, 12, 10, 10, 12, 3, 11, 2, 1]);
        let b2 = perm_apply(&b1, Unit::new(3, 13).unwrap()).unwrap();
        let b3 = perm_apply(&b1, Unit::new(9, 13).unwrap()).unwrap();
        MggsGroup::new(13, vec![b1, b2, b3]).unwrap()
    }

    fn gs(p: u64) -> MggsGroup {
        let mut row = vec![0i64; (p - 1) as usize];
        row[0] = 1;
        row[1] = -1;
        MggsGroup::new(p, vec![FpVec::new(p, row)]).unwrap()
    }

    #[test]
    fn constant_groups_are_rejected() {
        let constant = MggsGroup::new(3, vec![FpVec::new(3, [1, 1])]).unwrap();
        assert!(matches!(
            compute_u(&constant),
            Err(Error::ConstantUnsupported)
        ));
        assert!(matches!(
            aut_structure(&constant),
            Err(Error::ConstantUnsupported)
        ));
    }

    #[test]
    fn conjugation_check_needs_depth_two() {
        let g = sym5();
        let seq = NormalizerSequence::from_values(5, vec![], vec![1]).unwrap();
        assert!(matches!(
            normalizer_conjugation_check(&seq, &g, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn u_of_symmetric_five() {
        assert_eq!(compute_u(&sym5()).unwrap(), vec![1, 4]);
    }

    #[test]
    fn u_of_maximal_example_is_everything() {
        assert_eq!(compute_u(&ex2(5)).unwrap(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn u_of_gupta_sidki_five_is_trivial() {
        assert_eq!(compute_u(&gs(5)).unwrap(), vec![1]);
    }

    #[test]
    fn v_of_thirteen_example() {
        let g = ex3();
        let u = compute_u(&g).unwrap();
        assert_eq!(u.len(), 12);
        let (v, scalars) = compute_v(&g, &u).unwrap();
        assert_eq!(v, vec![1, 5, 8, 12]);
        assert_eq!(scalars.get(&5), Some(&12));
        let w = compute_w(&scalars, 13);
        assert_eq!(w, vec![1, 12]);
    }

    #[test]
    fn one_is_always_in_v_with_scalar_one() {
        for g in [sym5(), ex2(5), gs(3)] {
            let u = compute_u(&g).unwrap();
            let (v, scalars) = compute_v(&g, &u).unwrap();
            assert!(v.contains(&1));
            assert_eq!(scalars.get(&1), Some(&1));
        }
    }

    #[test]
    fn scalar_map_is_multiplicative() {
        for g in [ex2(5), ex2(7), ex3(), sym5()] {
            let p = g.p();
            let u = compute_u(&g).unwrap();
            let (v, scalars) = compute_v(&g, &u).unwrap();
            for &v1 in &v {
                for &v2 in &v {
                    let prod = mul_mod(v1, v2, p);
                    assert!(v.contains(&prod));
                    assert_eq!(
                        scalars[&prod],
                        mul_mod(scalars[&v1], scalars[&v2], p),
                        "scalars multiply on V"
                    );
                }
            }
        }
    }

    #[test]
    fn rank_one_spaces_have_u_equal_v() {
        for g in [sym5(), ex2(5), ex2(7), gs(3), gs(5)] {
            let u = compute_u(&g).unwrap();
            let (v, _) = compute_v(&g, &u).unwrap();
            assert_eq!(u, v);
        }
    }

    #[test]
    fn structure_strings_match_report_contract() {
        assert_eq!(aut_structure(&sym5()).unwrap().structure, "(G ⋊ C_5) ⋊ C_2");
        assert_eq!(
            aut_structure(&ex2(5)).unwrap().structure,
            "(G ⋊ ∏_ω C_5) ⋊ (C_4)²"
        );
        assert_eq!(
            aut_structure(&gs(3)).unwrap().structure,
            "(G ⋊ ∏_ω C_3) ⋊ C_2²"
        );
        assert_eq!(aut_structure(&gs(5)).unwrap().structure, "G ⋊ ∏_ω C_5");
        assert_eq!(
            aut_structure(&MggsGroup::full_space(5).unwrap())
                .unwrap()
                .structure,
            "(G ⋊ ∏_ω C_5) ⋊ C_4"
        );
    }

    #[test]
    fn symmetric_report_raises_reflection_flag() {
        let rep = aut_structure(&sym5()).unwrap();
        assert!(rep.reflection_scalar_trivial);
        assert_eq!(rep.w, vec![1]);
        assert!(rep.out_finite);
        assert!(rep.coprime_autos);
        let rep2 = aut_structure(&gs(5)).unwrap();
        assert!(!rep2.reflection_scalar_trivial);
        assert!(!rep2.out_finite);
        assert!(!rep2.coprime_autos);
    }

    #[test]
    fn report_json_round_trips() {
        let rep = aut_structure(&ex3()).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        let back: AutReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn constant_sequence_for_trivial_parameters() {
        let g = sym5();
        let seq =
            normalizer_sequence(&g, Unit::new(1, 5).unwrap(), Unit::new(1, 5).unwrap()).unwrap();
        assert!(seq.preperiod().is_empty());
        assert_eq!(seq.period(), &[1]);
    }

    #[test]
    fn symmetric_reflection_gives_constant_sequence() {
        let g = sym5();
        let seq =
            normalizer_sequence(&g, Unit::new(4, 5).unwrap(), Unit::new(1, 5).unwrap()).unwrap();
        assert!(seq.preperiod().is_empty());
        assert_eq!(seq.period(), &[4]);
        for k in 0..6 {
            assert_eq!(seq.get(k), 4);
        }
    }

    #[test]
    fn thirteen_example_sequence_is_eventually_constant() {
        let g = ex3();
        let seq =
            normalizer_sequence(&g, Unit::new(3, 13).unwrap(), Unit::new(12, 13).unwrap()).unwrap();
        // d_0 = 3, d_1 = 3·12 = 10, and the attained scalar of 12 is 1, so
        // the tail is constant at 10.
        assert_eq!(seq.get(0), 3);
        assert_eq!(seq.get(1), 10);
        assert_eq!(seq.get(2), 10);
        assert_eq!(seq.get(7), 10);
    }

    #[test]
    fn sequence_rejects_parameters_outside_domains() {
        let g = sym5();
        assert!(matches!(
            normalizer_sequence(&g, Unit::new(2, 5).unwrap(), Unit::new(1, 5).unwrap()),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            normalizer_sequence(&g, Unit::new(4, 5).unwrap(), Unit::new(4, 5).unwrap()),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn identity_sequence_passes_conjugation_check() {
        let g = sym5();
        let seq = NormalizerSequence::from_values(5, vec![], vec![1]).unwrap();
        assert!(normalizer_conjugation_check(&seq, &g, 3).unwrap().passed);
    }

    #[test]
    fn symmetric_generator_sequence_passes_at_depth_three() {
        let g = sym5();
        let seq =
            normalizer_sequence(&g, Unit::new(4, 5).unwrap(), Unit::new(1, 5).unwrap()).unwrap();
        let check = normalizer_conjugation_check(&seq, &g, 3).unwrap();
        assert!(check.passed, "witness: {:?}", check.witness);
    }

    #[test]
    fn non_stabilizing_unit_fails_with_witness() {
        let g = sym5();
        // 2 is not in U for the symmetric space.
        let seq = NormalizerSequence::from_values(5, vec![], vec![2]).unwrap();
        let check = normalizer_conjugation_check(&seq, &g, 3).unwrap();
        assert!(!check.passed);
        assert!(check.witness.unwrap().contains("row space"));
    }
}
