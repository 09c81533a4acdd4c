//! Depth-truncated automorphisms of the p-regular rooted tree.
//!
//! A portrait of depth `n` stores one affine label `x ↦ u·x + t` for every
//! vertex of length `< n`, in breadth-first order. Vertices are words over
//! `{0, …, p-1}`; the label at the prefix `v` tells how the next letter
//! after `v` moves. All groups in this crate live inside the affine-labelled
//! subgroup, which keeps labels `O(1)` and composition exact.
//!
//! The action is on the right: `apply(g·h, v) = apply(h, apply(g, v))`,
//! and labels compose by `(g·h)|^v = g|^v · h|^{apply(g, v)}` where the
//! product of labels applies the left factor first.

use crate::error::{Error, Result};
use crate::fpalg::{add_mod, inv_mod, mul_mod, neg_mod};
use serde::{Deserialize, Serialize};

/// The permutation `x ↦ u·x + t` of `{0, …, p-1}`, with `u` a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineLabel {
    pub u: u64,
    pub t: u64,
}

impl AffineLabel {
    pub const IDENTITY: AffineLabel = AffineLabel { u: 1, t: 0 };

    /// The cycle `x ↦ x + t`.
    pub fn translation(t: u64) -> Self {
        Self { u: 1, t }
    }

    /// The multiplication `x ↦ u·x`.
    pub fn scaling(u: u64) -> Self {
        Self { u, t: 0 }
    }

    pub fn is_identity(self) -> bool {
        self.u == 1 && self.t == 0
    }

    pub fn apply(self, x: u64, p: u64) -> u64 {
        add_mod(mul_mod(self.u, x, p), self.t, p)
    }

    /// Composite that applies `self` first and `other` second.
    pub fn then(self, other: Self, p: u64) -> Self {
        Self {
            u: mul_mod(self.u, other.u, p),
            t: add_mod(mul_mod(other.u, self.t, p), other.t, p),
        }
    }

    pub fn inverse(self, p: u64) -> Self {
        let ui = inv_mod(self.u, p).expect("label coefficient is a unit");
        Self {
            u: ui,
            t: neg_mod(mul_mod(ui, self.t, p), p),
        }
    }
}

/// Number of vertices of length `< depth` in the p-regular tree.
pub fn portrait_len(p: u64, depth: usize) -> usize {
    let mut total = 0usize;
    let mut level = 1usize;
    for _ in 0..depth {
        total += level;
        level *= p as usize;
    }
    total
}

/// A depth-truncated tree automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Portrait {
    p: u64,
    depth: usize,
    /// Labels in breadth-first vertex order.
    labels: Vec<AffineLabel>,
}

/// Serialized form: `{"p": .., "depth": .., "labels": [[u, t], ..]}`.
#[derive(Serialize, Deserialize)]
struct PortraitRepr {
    p: u64,
    depth: usize,
    labels: Vec<(u64, u64)>,
}

impl Serialize for Portrait {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PortraitRepr {
            p: self.p,
            depth: self.depth,
            labels: self.labels.iter().map(|l| (l.u, l.t)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Portrait {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PortraitRepr::deserialize(d)?;
        if repr.labels.len() != portrait_len(repr.p, repr.depth) {
            return Err(serde::de::Error::custom("label count does not match depth"));
        }
        for &(u, t) in &repr.labels {
            if u == 0 || u >= repr.p || t >= repr.p {
                return Err(serde::de::Error::custom("label out of range"));
            }
        }
        Ok(Portrait {
            p: repr.p,
            depth: repr.depth,
            labels: repr
                .labels
                .into_iter()
                .map(|(u, t)| AffineLabel { u, t })
                .collect(),
        })
    }
}

/// Index of the first vertex of a level in breadth-first order.
fn level_start(p: u64, level: usize) -> usize {
    portrait_len(p, level)
}

impl Portrait {
    pub fn identity(p: u64, depth: usize) -> Self {
        Self {
            p,
            depth,
            labels: vec![AffineLabel::IDENTITY; portrait_len(p, depth)],
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().all(|l| l.is_identity())
    }

    fn vertex_index(&self, v: &[u64]) -> usize {
        let mut rank = 0usize;
        for &x in v {
            debug_assert!(x < self.p);
            rank = rank * self.p as usize + x as usize;
        }
        level_start(self.p, v.len()) + rank
    }

    /// Label at a vertex of length `< depth`.
    pub fn label(&self, v: &[u64]) -> Result<AffineLabel> {
        if v.len() >= self.depth {
            return Err(Error::DepthExceeded {
                len: v.len(),
                depth: self.depth,
            });
        }
        Ok(self.labels[self.vertex_index(v)])
    }

    pub(crate) fn set_label(&mut self, v: &[u64], l: AffineLabel) {
        let idx = self.vertex_index(v);
        self.labels[idx] = l;
    }

    /// Labels of one whole level, in vertex rank order.
    pub fn level_labels(&self, level: usize) -> &[AffineLabel] {
        let start = level_start(self.p, level);
        let count = (self.p as usize).pow(level as u32);
        &self.labels[start..start + count]
    }

    /// Image of a vertex of length `<= depth`.
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() > self.depth {
            return Err(Error::DepthExceeded {
                len: v.len(),
                depth: self.depth,
            });
        }
        let mut out = Vec::with_capacity(v.len());
        for (i, &x) in v.iter().enumerate() {
            let l = self.labels[self.vertex_index(&v[..i])];
            out.push(l.apply(x, self.p));
        }
        Ok(out)
    }

    /// Truncation to a smaller depth.
    pub fn truncate(&self, depth: usize) -> Portrait {
        let depth = depth.min(self.depth);
        Portrait {
            p: self.p,
            depth,
            labels: self.labels[..portrait_len(self.p, depth)].to_vec(),
        }
    }

    /// Product `self · other`; the result is truncated to the smaller depth.
    pub fn compose(&self, other: &Portrait) -> Result<Portrait> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        let p = self.p;
        let depth = self.depth.min(other.depth);
        let g = self.truncate(depth);
        let h = other.truncate(depth);
        let n = portrait_len(p, depth);
        let mut labels = vec![AffineLabel::IDENTITY; n];
        // image[i] = breadth-first index of the g-image of vertex i.
        let mut image = vec![0usize; n.max(1)];
        if depth > 0 {
            image[0] = 0;
        }
        for level in 0..depth {
            let start = level_start(p, level);
            let count = (p as usize).pow(level as u32);
            for rank in 0..count {
                let idx = start + rank;
                let gl = g.labels[idx];
                labels[idx] = gl.then(h.labels[image[idx]], p);
                if level + 1 < depth {
                    let child_base = level_start(p, level + 1) + rank * p as usize;
                    let image_rank = image[idx] - start;
                    let image_child_base = level_start(p, level + 1) + image_rank * p as usize;
                    for x in 0..p {
                        image[child_base + x as usize] = image_child_base + gl.apply(x, p) as usize;
                    }
                }
            }
        }
        Ok(Portrait { p, depth, labels })
    }

    pub fn inverse(&self) -> Portrait {
        let p = self.p;
        let depth = self.depth;
        let n = portrait_len(p, depth);
        let mut labels = vec![AffineLabel::IDENTITY; n];
        let mut image = vec![0usize; n.max(1)];
        if depth > 0 {
            image[0] = 0;
        }
        for level in 0..depth {
            let start = level_start(p, level);
            let count = (p as usize).pow(level as u32);
            for rank in 0..count {
                let idx = start + rank;
                let gl = self.labels[idx];
                labels[image[idx]] = gl.inverse(p);
                if level + 1 < depth {
                    let child_base = level_start(p, level + 1) + rank * p as usize;
                    let image_rank = image[idx] - start;
                    let image_child_base = level_start(p, level + 1) + image_rank * p as usize;
                    for x in 0..p {
                        image[child_base + x as usize] = image_child_base + gl.apply(x, p) as usize;
                    }
                }
            }
        }
        Portrait { p, depth, labels }
    }

    /// Integer power, with negative exponents via the inverse.
    pub fn pow(&self, k: i64) -> Result<Portrait> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Portrait::identity(self.p, self.depth);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    /// Conjugate `self^h = h^{-1} · self · h`.
    pub fn conjugate(&self, h: &Portrait) -> Result<Portrait> {
        h.inverse().compose(self)?.compose(h)
    }

    /// Commutator `[self, other] = self^{-1} · other^{-1} · self · other`.
    pub fn commutator(&self, other: &Portrait) -> Result<Portrait> {
        self.inverse()
            .compose(&other.inverse())?
            .compose(self)?
            .compose(other)
    }

    /// Section below the vertex `v`: the portrait `w ↦ label(v·w)` of depth
    /// `depth - |v|`.
    pub fn section(&self, v: &[u64]) -> Result<Portrait> {
        if v.len() > self.depth {
            return Err(Error::DepthExceeded {
                len: v.len(),
                depth: self.depth,
            });
        }
        let p = self.p;
        let depth = self.depth - v.len();
        let mut out = Portrait::identity(p, depth);
        let mut prefix = v.to_vec();
        let mut scratch = Vec::new();
        fill_section(self, &mut prefix, &mut scratch, &mut out, depth);
        Ok(out)
    }

    /// True iff the labels of the two portraits agree at all vertices of
    /// length `< n`.
    pub fn equal_at_depth(&self, other: &Portrait, n: usize) -> Result<bool> {
        if n > self.depth || n > other.depth {
            return Err(Error::DepthExceeded {
                len: n,
                depth: self.depth.min(other.depth),
            });
        }
        let len = portrait_len(self.p, n);
        Ok(self.p == other.p && self.labels[..len] == other.labels[..len])
    }

    /// Compact canonical key for hashing and ordered dumps.
    pub fn canon_key(&self) -> Vec<u16> {
        self.labels
            .iter()
            .flat_map(|l| [l.u as u16, l.t as u16])
            .collect()
    }

    /// Assembles a first-level stabilizer from its `p` sections.
    pub fn from_sections(p: u64, sections: &[Portrait]) -> Result<Portrait> {
        if sections.len() != p as usize {
            return Err(Error::Dimension {
                expected: p as usize,
                got: sections.len(),
            });
        }
        let inner = sections.iter().map(|s| s.depth).min().unwrap_or(0);
        let depth = inner + 1;
        let mut out = Portrait::identity(p, depth);
        for (k, s) in sections.iter().enumerate() {
            if s.p != p {
                return Err(Error::ModulusMismatch(p, s.p));
            }
            let mut prefix = vec![k as u64];
            copy_labels(s, &mut prefix, &mut out, inner);
        }
        Ok(out)
    }

    /// The portrait equal to `g` below the vertex `v` and trivial elsewhere.
    pub fn embed_at(v: &[u64], g: &Portrait) -> Portrait {
        let depth = v.len() + g.depth;
        let mut out = Portrait::identity(g.p, depth);
        let mut prefix = v.to_vec();
        copy_labels(g, &mut prefix, &mut out, g.depth);
        out
    }
}

fn copy_labels(src: &Portrait, prefix: &mut Vec<u64>, dst: &mut Portrait, levels: usize) {
    // Copies src's labels at suffixes of length < levels to prefix·suffix.
    fn rec(
        src: &Portrait,
        suffix: &mut Vec<u64>,
        prefix: &mut Vec<u64>,
        dst: &mut Portrait,
        levels: usize,
    ) {
        if suffix.len() >= levels {
            return;
        }
        let l = src.label(suffix).expect("within depth");
        let full: Vec<u64> = prefix.iter().chain(suffix.iter()).copied().collect();
        dst.set_label(&full, l);
        for x in 0..src.p {
            suffix.push(x);
            rec(src, suffix, prefix, dst, levels);
            suffix.pop();
        }
    }
    let mut suffix = Vec::new();
    rec(src, &mut suffix, prefix, dst, levels);
}

fn fill_section(
    src: &Portrait,
    prefix: &mut Vec<u64>,
    suffix: &mut Vec<u64>,
    dst: &mut Portrait,
    levels: usize,
) {
    if suffix.len() >= levels {
        return;
    }
    let l = src.label(prefix).expect("within depth");
    dst.set_label(suffix, l);
    for x in 0..src.p {
        prefix.push(x);
        suffix.push(x);
        fill_section(src, prefix, suffix, dst, levels);
        suffix.pop();
        prefix.pop();
    }
}

/// The rooted automorphism with the given label: it acts at the root and is
/// trivial elsewhere.
pub fn rooted(p: u64, depth: usize, label: AffineLabel) -> Portrait {
    let mut out = Portrait::identity(p, depth);
    if depth > 0 {
        out.labels[0] = label;
    }
    out
}

/// The m-th diagonal of `g`: a copy of `g` below every vertex of level `m`.
/// The result has depth `m + depth(g)`.
pub fn kappa(m: usize, g: &Portrait) -> Portrait {
    let p = g.p;
    let depth = m + g.depth;
    let mut out = Portrait::identity(p, depth);
    for level in m..depth {
        let inner_level = level - m;
        let inner = g.level_labels(inner_level);
        let start = level_start(p, level);
        let count = (p as usize).pow(level as u32);
        let inner_count = inner.len();
        for rank in 0..count {
            out.labels[start + rank] = inner[rank % inner_count];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> AffineLabel {
        AffineLabel::translation(1)
    }

    #[test]
    fn rooted_cycle_moves_first_letter() {
        let a = rooted(5, 2, sigma());
        assert_eq!(a.apply(&[0]).unwrap(), vec![1]);
        assert_eq!(a.apply(&[4, 2]).unwrap(), vec![0, 2]);
    }

    #[test]
    fn identity_fixes_everything() {
        let id = Portrait::identity(3, 3);
        assert_eq!(id.apply(&[2, 1, 0]).unwrap(), vec![2, 1, 0]);
    }

    #[test]
    fn rooted_square_acts_by_double_shift() {
        let a2 = rooted(3, 3, AffineLabel::translation(2));
        assert_eq!(a2.apply(&[2, 1]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn rooted_scaling_fixes_zero() {
        let d = rooted(5, 2, AffineLabel::scaling(2));
        assert_eq!(d.apply(&[0]).unwrap(), vec![0]);
        assert_eq!(d.apply(&[3]).unwrap(), vec![1]);
    }

    #[test]
    fn cycle_has_order_p() {
        let a = rooted(5, 3, sigma());
        assert!(a.pow(5).unwrap().is_identity());
        assert!(!a.pow(3).unwrap().is_identity());
    }

    #[test]
    fn product_with_inverse_is_identity() {
        let a = rooted(3, 3, sigma());
        let k = kappa(1, &rooted(3, 2, AffineLabel::translation(2)));
        let g = a.compose(&k).unwrap();
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
        assert!(g.inverse().compose(&g).unwrap().is_identity());
    }

    #[test]
    fn apply_preserves_length() {
        let g = kappa(1, &rooted(3, 2, sigma()));
        for v in [vec![0], vec![1, 2], vec![2, 0, 1]] {
            assert_eq!(g.apply(&v).unwrap().len(), v.len());
        }
    }

    #[test]
    fn composition_acts_left_first() {
        let a = rooted(3, 2, sigma());
        let d = rooted(3, 2, AffineLabel::scaling(2));
        let ad = a.compose(&d).unwrap();
        // 0 -> 1 under a, then 1 -> 2 under d.
        assert_eq!(ad.apply(&[0]).unwrap(), vec![2]);
        let da = d.compose(&a).unwrap();
        // 0 -> 0 under d, then 0 -> 1 under a.
        assert_eq!(da.apply(&[0]).unwrap(), vec![1]);
    }

    #[test]
    fn section_of_product_rule() {
        // (g·h)|_v = g|_v · h|_{v^g} for sampled portraits.
        let p = 3;
        let g = rooted(p, 3, sigma())
            .compose(&kappa(1, &rooted(p, 2, AffineLabel::translation(2))))
            .unwrap();
        let h = kappa(1, &rooted(p, 2, sigma()))
            .compose(&rooted(p, 3, AffineLabel::translation(2)))
            .unwrap();
        let gh = g.compose(&h).unwrap();
        for v in [vec![0u64], vec![1], vec![2]] {
            let lhs = gh.section(&v).unwrap();
            let img = g.apply(&v).unwrap();
            let rhs = g
                .section(&v)
                .unwrap()
                .compose(&h.section(&img).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn section_of_identity_is_identity() {
        let id = Portrait::identity(3, 3);
        assert!(id.section(&[1]).unwrap().is_identity());
    }

    #[test]
    fn kappa_zero_is_identity_map() {
        let g = rooted(3, 2, sigma());
        assert_eq!(kappa(0, &g), g);
    }

    #[test]
    fn kappa_one_of_cycle_has_constant_level_one_labels() {
        let k = kappa(1, &rooted(3, 1, sigma()));
        assert!(k.label(&[]).unwrap().is_identity());
        for x in 0..3 {
            assert_eq!(k.label(&[x]).unwrap(), sigma());
        }
    }

    #[test]
    fn kappa_is_homomorphism() {
        let p = 3;
        let g = rooted(p, 2, sigma());
        let h = rooted(p, 2, AffineLabel::translation(2));
        let lhs = kappa(1, &g).compose(&kappa(1, &h)).unwrap();
        let rhs = kappa(1, &g.compose(&h).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn equal_at_depth_separates_diagonal_factor() {
        let p = 3;
        let n = 2;
        let a = rooted(p, n + 1, sigma());
        let a_kn = a.compose(&kappa(n, &rooted(p, 1, sigma()))).unwrap();
        assert!(a.equal_at_depth(&a_kn, n).unwrap());
        assert!(!a.equal_at_depth(&a_kn, n + 1).unwrap());
    }

    #[test]
    fn equal_at_depth_one_separates_rooted_from_stabilizer() {
        // A first-level stabilizer and the rooted cycle differ already at
        // the root label.
        let a = rooted(3, 2, sigma());
        let stab = kappa(1, &rooted(3, 1, sigma()));
        assert!(!a.equal_at_depth(&stab, 1).unwrap());
        assert!(stab.equal_at_depth(&Portrait::identity(3, 2), 1).unwrap());
    }

    #[test]
    fn embed_places_labels_below_vertex() {
        let inner = rooted(3, 2, sigma());
        let e = Portrait::embed_at(&[0], &inner);
        assert_eq!(e.depth(), 3);
        assert!(e.label(&[]).unwrap().is_identity());
        assert_eq!(e.label(&[0]).unwrap(), sigma());
        assert!(e.label(&[1]).unwrap().is_identity());
        assert_eq!(e.section(&[0]).unwrap(), inner);
    }

    #[test]
    fn from_sections_round_trip() {
        let p = 3;
        let secs = vec![
            rooted(p, 2, sigma()),
            Portrait::identity(p, 2),
            rooted(p, 2, AffineLabel::translation(2)),
        ];
        let g = Portrait::from_sections(p, &secs).unwrap();
        assert_eq!(g.depth(), 3);
        assert!(g.label(&[]).unwrap().is_identity());
        for (k, s) in secs.iter().enumerate() {
            assert_eq!(&g.section(&[k as u64]).unwrap(), s);
        }
    }

    #[test]
    fn serialization_round_trip_and_shape() {
        let a = rooted(3, 2, sigma());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(
            json,
            r#"{"p":3,"depth":2,"labels":[[1,1],[1,0],[1,0],[1,0]]}"#
        );
        let back: Portrait = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn random_group_axioms_hold_for_wider_alphabet() {
        // Random depth-2 portraits over p = 5: associativity, identity,
        // and inverses portrait-wise.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let p = 5;
        let random = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut g = Portrait::identity(p, 2);
            let mut verts: Vec<Vec<u64>> = vec![vec![]];
            for i in 0..p {
                verts.push(vec![i]);
            }
            for v in &verts {
                let u = rng.gen_range(1..p);
                let t = rng.gen_range(0..p);
                g.set_label(v, AffineLabel { u, t });
            }
            g
        };
        for _ in 0..50 {
            let (g, h, k) = (random(&mut rng), random(&mut rng), random(&mut rng));
            let lhs = g.compose(&h).unwrap().compose(&k).unwrap();
            let rhs = g.compose(&h.compose(&k).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            assert!(g.compose(&g.inverse()).unwrap().is_identity());
            assert_eq!(g.compose(&Portrait::identity(p, 2)).unwrap(), g);
        }
    }

    #[test]
    fn deep_vertices_are_rejected() {
        let g = rooted(3, 2, sigma());
        assert!(matches!(
            g.apply(&[0, 1, 2]),
            Err(crate::Error::DepthExceeded { .. })
        ));
        assert!(matches!(
            g.section(&[0, 1, 2]),
            Err(crate::Error::DepthExceeded { .. })
        ));
        assert!(matches!(
            g.label(&[0, 1]),
            Err(crate::Error::DepthExceeded { .. })
        ));
    }

    #[test]
    fn associativity_on_generated_set() {
        let p = 3;
        let gens = vec![
            rooted(p, 3, sigma()),
            kappa(1, &rooted(p, 2, sigma())),
            rooted(p, 3, AffineLabel::scaling(2)),
        ];
        let mut elems = gens.clone();
        for g in &gens {
            for h in &gens {
                elems.push(g.compose(h).unwrap());
            }
        }
        for g in &elems {
            for h in &elems {
                for k in &elems {
                    let lhs = g.compose(h).unwrap().compose(k).unwrap();
                    let rhs = g.compose(&h.compose(k).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
