//! Multi-GGS groups: construction, classification, stabilizer coordinates,
//! finite congruence quotients, and the order-p conjugator construction.
//!
//! A group is given by an odd prime `p` and a full-rank `r × (p-1)` matrix
//! `E` over `F_p`. The generators are the rooted cycle `a` and the directed
//! elements `b^n` with the recursion `b^n ↦ (b^n, a^{n·e_1}, …, a^{n·e_{p-1}})`,
//! where `e_i` are the columns of `E` and `e_0` is the zero column.

use crate::error::{Error, Result};
use crate::fpalg::{add_mod, check_modulus, neg_mod, FpMat, FpVec};
use crate::tree::{portrait_len, AffineLabel, Portrait};
use crate::words::{Gen, Word};
use std::collections::HashMap;

/// The defining-space trichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Constant,
    Symmetric,
    Regular,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Constant => write!(f, "constant"),
            Classification::Symmetric => write!(f, "symmetric"),
            Classification::Regular => write!(f, "regular"),
        }
    }
}

/// A multi-GGS group together with its classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MggsGroup {
    p: u64,
    r: usize,
    matrix: FpMat,
    classification: Classification,
}

impl MggsGroup {
    /// Builds the group from its defining rows. Rows must be nonzero, of
    /// length `p - 1`, and linearly independent.
    pub fn new(p: u64, rows: Vec<FpVec>) -> Result<Self> {
        check_modulus(p)?;
        if rows.is_empty() {
            return Err(Error::RankDeficient { rank: 0, rows: 0 });
        }
        for row in &rows {
            if row.modulus() != p {
                return Err(Error::ModulusMismatch(p, row.modulus()));
            }
            if row.len() != (p - 1) as usize {
                return Err(Error::Dimension {
                    expected: (p - 1) as usize,
                    got: row.len(),
                });
            }
        }
        let matrix = FpMat::new(p, rows)?;
        let rank = matrix.rank();
        if rank < matrix.num_rows() {
            return Err(Error::RankDeficient {
                rank,
                rows: matrix.num_rows(),
            });
        }
        let r = matrix.num_rows();
        let classification = classify(&matrix);
        Ok(Self {
            p,
            r,
            matrix,
            classification,
        })
    }

    /// The group over the full space `F_p^{p-1}` with the standard basis.
    pub fn full_space(p: u64) -> Result<Self> {
        let rows = (0..(p - 1) as usize)
            .map(|j| {
                let mut v = vec![0i64; (p - 1) as usize];
                v[j] = 1;
                FpVec::new(p, v)
            })
            .collect();
        Self::new(p, rows)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &FpMat {
        &self.matrix
    }

    pub fn classification(&self) -> Classification {
        self.classification
    }

    /// Column `e_i` of the defining matrix; `e_0` is the zero column.
    pub fn column(&self, i: usize) -> FpVec {
        if i == 0 {
            return FpVec::zero(self.p, self.r);
        }
        FpVec::from_raw(
            self.p,
            (0..self.r).map(|j| self.matrix.row(j).get(i - 1)).collect(),
        )
    }

    /// Portrait of the directed element `b^n` at the given depth.
    pub fn b_portrait(&self, n: &FpVec, depth: usize) -> Result<Portrait> {
        if n.len() != self.r {
            return Err(Error::Dimension {
                expected: self.r,
                got: n.len(),
            });
        }
        let p = self.p;
        let mut out = Portrait::identity(p, depth);
        // Along the ray 0, 00, 000, … the label pattern repeats: the vertex
        // 0^j·k with k != 0 carries the shift n·e_k.
        let mut spine = Vec::new();
        while spine.len() + 1 < depth {
            for k in 1..p {
                let exp = n.dot(&self.column(k as usize))?;
                spine.push(k);
                out.set_label(&spine, AffineLabel::translation(exp));
                spine.pop();
            }
            spine.push(0);
        }
        Ok(out)
    }

    /// The section of `c` at the vertex 0, i.e. the commutator `[b^{s_1}, a]`
    /// as a word.
    pub fn c_section_word(&self) -> Word {
        Word::b_basis(self.p, self.r, 0)
            .commutator(&Word::a(self.p, self.r, 1))
            .expect("same group context")
    }

    /// Portrait of the regularisation element `c`.
    pub fn c_portrait(&self, depth: usize) -> Result<Portrait> {
        Word::c(self.p, self.r, 1).evaluate(self, depth)
    }

    /// Generator words of the group itself: `a` and the basis `b^{s_j}`.
    pub fn generator_words(&self) -> Vec<Word> {
        let mut gens = vec![Word::a(self.p, self.r, 1)];
        for j in 0..self.r {
            gens.push(Word::b_basis(self.p, self.r, j));
        }
        gens
    }

    /// Generator words of the regularisation: the group generators plus `c`
    /// when the group is symmetric. Constant groups are not supported.
    pub fn regularisation_gens(&self) -> Result<Vec<Word>> {
        match self.classification {
            Classification::Constant => Err(Error::ConstantUnsupported),
            Classification::Regular => Ok(self.generator_words()),
            Classification::Symmetric => {
                let mut gens = self.generator_words();
                gens.push(Word::c(self.p, self.r, 1));
                Ok(gens)
            }
        }
    }
}

fn classify(matrix: &FpMat) -> Classification {
    let p = matrix.modulus();
    let cols = (p - 1) as usize;
    if matrix.num_rows() == 1 {
        let row = matrix.row(0);
        if row.entries().iter().all(|&e| e == row.get(0)) {
            return Classification::Constant;
        }
        let symmetric = (1..=cols).all(|i| row.get(i - 1) == row.get(cols - i));
        if symmetric {
            return Classification::Symmetric;
        }
    }
    Classification::Regular
}

/// Coordinates of a first-level stabilizer element: the vectors `n_k`, the
/// forced `a`-exponents `s_k = Σ_i n_i · e_{k-i}`, and the residual words
/// `y_k` with `g|_k = a^{s_k} b^{n_k} y_k`.
#[derive(Debug, Clone)]
pub struct StabCoordinates {
    pub n: Vec<FpVec>,
    pub s: Vec<u64>,
    pub l_words: Vec<Word>,
}

/// The forced `a`-exponents determined by a tuple of `p` vectors:
/// `s_k = Σ_{i=0}^{p-1} n_i · e_{k-i}` with indices mod p and `e_0 = 0`.
pub fn forced_a_coords(n: &[FpVec], group: &MggsGroup) -> Result<Vec<u64>> {
    let p = group.p;
    if n.len() != p as usize {
        return Err(Error::Dimension {
            expected: p as usize,
            got: n.len(),
        });
    }
    let mut s = vec![0u64; p as usize];
    for (k, sk) in s.iter_mut().enumerate() {
        for (i, ni) in n.iter().enumerate() {
            let col = (k + p as usize - i) % p as usize;
            *sk = add_mod(*sk, ni.dot(&group.column(col))?, p);
        }
    }
    Ok(s)
}

/// Decomposes a stabilizer word over `a`, `b` (and `c`) into coordinates.
/// For every `k`, `abelianize(sections_of_word(w)[k]) = (s_k, n_k)`.
pub fn b_coordinates(w: &Word, group: &MggsGroup) -> Result<StabCoordinates> {
    let p = group.p;
    if w.syllables()
        .iter()
        .any(|s| matches!(s, Gen::KappaA { .. }))
    {
        return Err(Error::ForeignSyllable(
            "diagonal generators have no stabilizer coordinates".into(),
        ));
    }
    let sections = w.sections_of_word(group)?;
    let mut n = vec![FpVec::zero(p, group.r); p as usize];
    let mut shift = 0u64;
    for syl in w.syllables() {
        match syl {
            Gen::A(k) => shift = add_mod(shift, *k, p),
            Gen::B(v) => {
                let slot = neg_mod(shift, p) as usize;
                n[slot] = n[slot].add(v);
            }
            Gen::C(_) => {}
            Gen::KappaA { .. } => unreachable!("rejected above"),
        }
    }
    let s = forced_a_coords(&n, group)?;
    let mut l_words = Vec::with_capacity(p as usize);
    for k in 0..p as usize {
        // y_k = (a^{s_k} b^{n_k})^{-1} · g|_k
        let prefix = Word::a(p, group.r, s[k] as i64)
            .concat(&Word::b(p, group.r, n[k].clone()))
            .unwrap()
            .inverse();
        l_words.push(prefix.concat(&sections[k])?);
    }
    Ok(StabCoordinates { n, s, l_words })
}

/// A finite congruence quotient: the set of depth-n portraits reachable from
/// the identity by right multiplication with the generator portraits.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    p: u64,
    depth: usize,
    gens: Vec<Word>,
    elements: Vec<Portrait>,
    index: HashMap<Vec<u16>, usize>,
    parents: Vec<Option<(usize, usize)>>,
}

/// Hard caps for quotient enumeration.
#[derive(Debug, Clone, Copy)]
pub struct QuotientBudget {
    /// Maximum number of labels per portrait, i.e. `(p^n - 1)/(p - 1)`.
    pub max_portrait_len: usize,
    /// Maximum number of group elements enumerated.
    pub max_elements: usize,
}

impl Default for QuotientBudget {
    fn default() -> Self {
        Self {
            max_portrait_len: 20_000,
            max_elements: 2_000_000,
        }
    }
}

/// Breadth-first enumeration of the image of `<gens>` in the group of
/// depth-n portraits. Deterministic: elements are discovered in BFS order
/// with generators applied in the given order.
pub fn enumerate_quotient(
    group: &MggsGroup,
    gens: &[Word],
    depth: usize,
    budget: QuotientBudget,
) -> Result<QuotientGroup> {
    let p = group.p;
    let plen = portrait_len(p, depth);
    if plen > budget.max_portrait_len {
        return Err(Error::ResourceBudget(format!(
            "portrait of depth {depth} has {plen} labels (cap {})",
            budget.max_portrait_len
        )));
    }
    let gen_portraits = gens
        .iter()
        .map(|w| w.evaluate(group, depth))
        .collect::<Result<Vec<_>>>()?;
    let identity = Portrait::identity(p, depth);
    let mut elements = vec![identity.clone()];
    let mut parents: Vec<Option<(usize, usize)>> = vec![None];
    let mut index = HashMap::new();
    index.insert(identity.canon_key(), 0usize);
    let mut frontier = 0usize;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        for (gi, gp) in gen_portraits.iter().enumerate() {
            let next = current.compose(gp)?;
            let key = next.canon_key();
            if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(key) {
                if elements.len() >= budget.max_elements {
                    return Err(Error::ResourceBudget(format!(
                        "quotient exceeds {} elements",
                        budget.max_elements
                    )));
                }
                slot.insert(elements.len());
                elements.push(next);
                parents.push(Some((frontier, gi)));
            }
        }
        frontier += 1;
    }
    Ok(QuotientGroup {
        p,
        depth,
        gens: gens.to_vec(),
        elements,
        index,
        parents,
    })
}

impl QuotientGroup {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in BFS discovery order.
    pub fn elements(&self) -> &[Portrait] {
        &self.elements
    }

    pub fn contains(&self, g: &Portrait) -> Result<bool> {
        if g.depth() < self.depth {
            return Err(Error::DepthExceeded {
                len: self.depth,
                depth: g.depth(),
            });
        }
        Ok(self.index.contains_key(&g.truncate(self.depth).canon_key()))
    }

    /// A word in the generators evaluating to the element (mod the depth-n
    /// stabilizer), reconstructed from the BFS tree.
    pub fn word_for(&self, idx: usize) -> Word {
        let mut gen_indices = Vec::new();
        let mut cur = idx;
        while let Some((parent, gi)) = self.parents[cur] {
            gen_indices.push(gi);
            cur = parent;
        }
        gen_indices.reverse();
        let p = self.p;
        let r = self.gens.first().map(|g| g.rank()).unwrap_or(1);
        let mut w = Word::empty(p, r);
        for gi in gen_indices {
            w = w.concat(&self.gens[gi]).expect("same group context");
        }
        w
    }

    /// Canonical JSON dump: the portraits sorted by label vector.
    pub fn to_sorted_json(&self) -> String {
        let mut sorted: Vec<&Portrait> = self.elements.iter().collect();
        sorted.sort_by_key(|g| g.canon_key());
        serde_json::to_string(&sorted).expect("portraits serialize")
    }
}

/// True iff the truncation of `g` lies in the enumerated quotient. This
/// certifies membership in `G·Stab(depth)`, a necessary condition for
/// membership in the group itself.
pub fn member_at_depth(g: &Portrait, q: &QuotientGroup) -> Result<bool> {
    q.contains(g)
}

/// The canonical coordinate word `Π_k a^{-k} b^{n_k} a^{k}`, a product of
/// generators with the prescribed slot vectors.
pub fn coordinate_word(n: &[FpVec], group: &MggsGroup) -> Result<Word> {
    let p = group.p;
    if n.len() != p as usize {
        return Err(Error::Dimension {
            expected: p as usize,
            got: n.len(),
        });
    }
    let mut w = Word::empty(p, group.r);
    for (k, nk) in n.iter().enumerate() {
        let piece = Word::a(p, group.r, -(k as i64))
            .concat(&Word::b(p, group.r, nk.clone()))?
            .concat(&Word::a(p, group.r, k as i64))?;
        w = w.concat(&piece)?;
    }
    Ok(w)
}

/// For a symmetric rank-1 group, the class in `G_reg/G ≅ C_p` of the
/// stabilizer element with the given section words, measured by the
/// commutator-exponent sum of the residuals relative to the canonical
/// coordinate word with the same slot vectors.
///
/// Returns an error when the section tuple cannot belong to the
/// regularisation stabilizer at all (actual and forced `a`-exponents
/// disagree). A zero degree is the membership criterion for the group
/// itself among such tuples.
pub fn regularisation_degree_from_sections(sections: &[Word], group: &MggsGroup) -> Result<u64> {
    let p = group.p;
    if group.r != 1 {
        return Err(Error::Precondition(
            "coset degree counting is a rank-1 computation".into(),
        ));
    }
    if sections.len() != p as usize {
        return Err(Error::Dimension {
            expected: p as usize,
            got: sections.len(),
        });
    }
    let mut n = Vec::with_capacity(p as usize);
    let mut actual = Vec::with_capacity(p as usize);
    for sec in sections {
        let (a_exp, b_vec) = sec.abelianize()?;
        actual.push(a_exp);
        n.push(b_vec);
    }
    let forced = forced_a_coords(&n, group)?;
    if actual != forced {
        return Err(Error::Precondition(format!(
            "actual a-exponents {actual:?} differ from the forced ones {forced:?}"
        )));
    }
    let canonical = coordinate_word(&n, group)?.sections_of_word(group)?;
    let mut degree = 0u64;
    for (sec, base) in sections.iter().zip(&canonical) {
        let residual = base.inverse().concat(sec)?;
        degree = add_mod(degree, residual.commutator_exponent()?, p);
    }
    Ok(degree)
}

/// Degree of a stabilizer word computed through its sections; for genuine
/// words over the regularisation alphabet this equals the sum of the `c`
/// exponents mod p.
pub fn regularisation_degree(w: &Word, group: &MggsGroup) -> Result<u64> {
    let sections = w.sections_of_word(group)?;
    regularisation_degree_from_sections(&sections, group)
}

/// The conjugator produced for an order-p element: `h` with `a^h = a·g`,
/// realized through its `p` section words `h|_k = a^s · g|_0 ⋯ g|_{k-1}`.
#[derive(Debug, Clone)]
pub struct Conjugator {
    pub shift: u64,
    pub section_words: Vec<Word>,
}

impl Conjugator {
    /// The portrait `ψ_1^{-1}(h|_0, …, h|_{p-1})` at the given depth.
    pub fn portrait(&self, group: &MggsGroup, depth: usize) -> Result<Portrait> {
        if depth == 0 {
            return Ok(Portrait::identity(group.p(), 0));
        }
        let sections = self
            .section_words
            .iter()
            .map(|w| w.evaluate(group, depth - 1))
            .collect::<Result<Vec<_>>>()?;
        Portrait::from_sections(group.p(), &sections)
    }
}

/// Builds a conjugator realizing `a^h = a·g` for a stabilizer word `g` such
/// that `a·g` has order p (checked at the given depth).
///
/// Since `(a·g)|_k = g|_{k+1}`, the sections must telescope as
/// `h|_k = a^s g|_1 ⋯ g|_k`; the shift `s` is the forced `a`-exponent at 0
/// of the cumulative vectors `m_k = Σ_{1 ≤ i ≤ k} n_i`, which makes the
/// forced and actual exponents of `h` agree in every slot.
pub fn order_p_conjugator(g: &Word, group: &MggsGroup, depth: usize) -> Result<Conjugator> {
    let p = group.p;
    let a = Word::a(p, group.r, 1).evaluate(group, depth)?;
    let ag = a.compose(&g.evaluate(group, depth)?)?;
    if !ag.pow(p as i64)?.is_identity() {
        return Err(Error::Precondition(format!(
            "(a·g)^{p} is not the identity at depth {depth}"
        )));
    }
    let sections = g.sections_of_word(group)?;
    let n: Vec<FpVec> = sections
        .iter()
        .map(|sec| sec.abelianize().map(|(_, b)| b))
        .collect::<Result<Vec<_>>>()?;
    // Cumulative B-coordinates of h: m_0 = 0, m_k = n_1 + … + n_k.
    let mut cumulative = Vec::with_capacity(p as usize);
    let mut acc = FpVec::zero(p, group.r);
    cumulative.push(acc.clone());
    for nk in n.iter().skip(1) {
        acc = acc.add(nk);
        cumulative.push(acc.clone());
    }
    let shift = forced_a_coords(&cumulative, group)?[0];
    let mut section_words = Vec::with_capacity(p as usize);
    let mut prefix = Word::a(p, group.r, shift as i64);
    section_words.push(prefix.clone());
    for sec in sections.iter().skip(1) {
        prefix = prefix.concat(sec)?;
        section_words.push(prefix.clone());
    }
    Ok(Conjugator {
        shift,
        section_words,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::rooted;

    fn gs3() -> MggsGroup {
        MggsGroup::new(3, vec![FpVec::new(3, [1, 2])]).unwrap()
    }

    fn sym5() -> MggsGroup {
        MggsGroup::new(5, vec![FpVec::new(5, [1, 2, 2, 1])]).unwrap()
    }

    #[test]
    fn classify_symmetric_example() {
        assert_eq!(sym5().classification(), Classification::Symmetric);
    }

    #[test]
    fn classify_regular_example() {
        let g = MggsGroup::new(5, vec![FpVec::new(5, [1, 2, 3, 4])]).unwrap();
        assert_eq!(g.classification(), Classification::Regular);
    }

    #[test]
    fn classify_constant_example() {
        let g = MggsGroup::new(3, vec![FpVec::new(3, [1, 1])]).unwrap();
        assert_eq!(g.classification(), Classification::Constant);
        let g2 = MggsGroup::new(5, vec![FpVec::new(5, [2, 2, 2, 2])]).unwrap();
        assert_eq!(g2.classification(), Classification::Constant);
    }

    #[test]
    fn gupta_sidki_three_is_regular() {
        assert_eq!(gs3().classification(), Classification::Regular);
    }

    #[test]
    fn construct_rejects_dependent_rows() {
        let err = MggsGroup::new(
            5,
            vec![FpVec::new(5, [1, 2, 2, 1]), FpVec::new(5, [2, 4, 4, 2])],
        );
        assert!(matches!(err, Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn construct_rejects_zero_row() {
        assert!(MggsGroup::new(5, vec![FpVec::new(5, [0, 0, 0, 0])]).is_err());
    }

    #[test]
    fn full_space_is_regular_and_degenerate_rank() {
        for p in [3u64, 5] {
            let g = MggsGroup::full_space(p).unwrap();
            assert_eq!(g.rank(), (p - 1) as usize);
            assert_eq!(g.classification(), Classification::Regular);
        }
    }

    #[test]
    fn forced_coords_zero_input() {
        let g = sym5();
        let n = vec![FpVec::zero(5, 1); 5];
        assert_eq!(forced_a_coords(&n, &g).unwrap(), vec![0; 5]);
    }

    #[test]
    fn forced_coords_single_slot() {
        let g = sym5();
        let mut n = vec![FpVec::zero(5, 1); 5];
        n[0] = FpVec::new(5, [1]);
        assert_eq!(forced_a_coords(&n, &g).unwrap(), vec![0, 1, 2, 2, 1]);
    }

    #[test]
    fn forced_coords_diagonal_form_vanishes_for_gupta_sidki() {
        let g = gs3();
        let n = vec![FpVec::new(3, [1]); 3];
        assert_eq!(forced_a_coords(&n, &g).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn b_coordinates_of_single_b() {
        let g = gs3();
        let w = Word::b(3, 1, FpVec::new(3, [1]));
        let coords = b_coordinates(&w, &g).unwrap();
        assert_eq!(coords.n[0], FpVec::new(3, [1]));
        assert!(coords.n[1].is_zero() && coords.n[2].is_zero());
        assert_eq!(coords.s, vec![0, 1, 2]);
        for y in &coords.l_words {
            let (a, b) = y.abelianize().unwrap();
            assert_eq!(a, 0);
            assert!(b.is_zero());
        }
    }

    #[test]
    fn b_coordinates_of_empty_word() {
        let g = gs3();
        let coords = b_coordinates(&Word::empty(3, 1), &g).unwrap();
        assert!(coords.n.iter().all(FpVec::is_zero));
        assert_eq!(coords.s, vec![0, 0, 0]);
    }

    #[test]
    fn b_coordinates_of_diagonal_product() {
        // b · b^{a^2} · b^{a} has every slot vector 1 and forced coords 0.
        let g = gs3();
        let b = Word::b_basis(3, 1, 0);
        let a = Word::a(3, 1, 1);
        let w = b
            .concat(&b.conjugate(&a.pow(2)).unwrap())
            .unwrap()
            .concat(&b.conjugate(&a).unwrap())
            .unwrap();
        let coords = b_coordinates(&w, &g).unwrap();
        for k in 0..3 {
            assert_eq!(coords.n[k], FpVec::new(3, [1]));
            assert_eq!(coords.s[k], 0);
        }
        // Contract: sections abelianize to (s_k, n_k).
        let secs = w.sections_of_word(&g).unwrap();
        for (k, sec) in secs.iter().enumerate() {
            let (a_exp, b_vec) = sec.abelianize().unwrap();
            assert_eq!(a_exp, coords.s[k]);
            assert_eq!(b_vec, coords.n[k]);
        }
    }

    #[test]
    fn b_coordinates_reject_diagonal_syllables() {
        let g = gs3();
        let w = Word::kappa_a(3, 1, 1, 1);
        assert!(matches!(
            b_coordinates(&w, &g),
            Err(Error::ForeignSyllable(_))
        ));
    }

    #[test]
    fn membership_needs_enough_depth() {
        let g = gs3();
        let q = enumerate_quotient(&g, &g.generator_words(), 2, QuotientBudget::default()).unwrap();
        let shallow = Portrait::identity(3, 1);
        assert!(matches!(
            member_at_depth(&shallow, &q),
            Err(Error::DepthExceeded { .. })
        ));
    }

    #[test]
    fn quotient_of_rooted_cycle_has_p_elements() {
        let g = gs3();
        let q = enumerate_quotient(&g, &[Word::a(3, 1, 1)], 2, QuotientBudget::default()).unwrap();
        assert_eq!(q.len(), 3);
    }

    #[test]
    fn quotient_depth_one_is_cyclic_image() {
        let g = gs3();
        let q = enumerate_quotient(&g, &g.generator_words(), 1, QuotientBudget::default()).unwrap();
        assert_eq!(q.len(), 3);
    }

    #[test]
    fn quotient_words_evaluate_to_their_elements() {
        let g = gs3();
        let q = enumerate_quotient(&g, &g.generator_words(), 2, QuotientBudget::default()).unwrap();
        for idx in 0..q.len() {
            let w = q.word_for(idx);
            assert_eq!(
                w.evaluate(&g, 2).unwrap(),
                q.elements()[idx],
                "word {w} disagrees at index {idx}"
            );
        }
    }

    #[test]
    fn member_at_depth_accepts_generated_words() {
        let g = gs3();
        let q = enumerate_quotient(&g, &g.generator_words(), 2, QuotientBudget::default()).unwrap();
        assert!(member_at_depth(&Portrait::identity(3, 2), &q).unwrap());
        let w = Word::b_basis(3, 1, 0).concat(&Word::a(3, 1, 2)).unwrap();
        assert!(member_at_depth(&w.evaluate(&g, 3).unwrap(), &q).unwrap());
    }

    #[test]
    fn quotient_budget_is_enforced() {
        let g = gs3();
        let err = enumerate_quotient(
            &g,
            &g.generator_words(),
            9,
            QuotientBudget {
                max_portrait_len: 100,
                max_elements: 10,
            },
        );
        assert!(matches!(err, Err(Error::ResourceBudget(_))));
    }

    #[test]
    fn regularisation_gens_by_classification() {
        assert_eq!(gs3().regularisation_gens().unwrap().len(), 2);
        assert_eq!(sym5().regularisation_gens().unwrap().len(), 3);
        let constant = MggsGroup::new(3, vec![FpVec::new(3, [1, 1])]).unwrap();
        assert!(matches!(
            constant.regularisation_gens(),
            Err(Error::ConstantUnsupported)
        ));
    }

    #[test]
    fn conjugator_for_identity_is_identity() {
        let g = gs3();
        let c = order_p_conjugator(&Word::empty(3, 1), &g, 3).unwrap();
        assert_eq!(c.shift, 0);
        let h = c.portrait(&g, 3).unwrap();
        assert!(h.is_identity());
    }

    #[test]
    fn conjugator_conjugates_a_to_ag() {
        let g = gs3();
        let x = Word::b_basis(3, 1, 0);
        // g = [a, x], so a·g = a^x has order 3.
        let gw = Word::a(3, 1, 1).commutator(&x).unwrap();
        let conj = order_p_conjugator(&gw, &g, 3).unwrap();
        let h = conj.portrait(&g, 3).unwrap();
        let a = rooted(3, 3, AffineLabel::translation(1));
        let ag = a.compose(&gw.evaluate(&g, 3).unwrap()).unwrap();
        assert_eq!(a.conjugate(&h).unwrap(), ag);
    }

    #[test]
    fn conjugator_rejects_non_order_p_input() {
        let g = gs3();
        // b is a stabilizer word but a·b does not have order 3.
        let err = order_p_conjugator(&Word::b_basis(3, 1, 0), &g, 3);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }
}
