//! Brute-force verification harness.
//!
//! Each check enumerates or samples at desk scale, compares two independent
//! routes to the same fact, and reports a [`CheckResult`] that carries a
//! replayable witness on failure. Checks are deterministic given a seed.

use crate::autgrp::{compute_u, compute_v, compute_w};
use crate::error::{Error, Result};
use crate::fpalg::{add_mod, FpVec};
use crate::group::{
    b_coordinates, coordinate_word, enumerate_quotient, forced_a_coords, member_at_depth,
    order_p_conjugator, regularisation_degree, regularisation_degree_from_sections, Classification,
    MggsGroup, QuotientBudget,
};
use crate::tree::{kappa, portrait_len, rooted, AffineLabel, Portrait};
use crate::words::{Gen, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Parameters a check ran with; serialized into the result for replay.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CheckParams {
    pub p: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub rows: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl CheckParams {
    fn for_group(group: &MggsGroup) -> Self {
        Self {
            p: group.p(),
            rows: group
                .matrix()
                .rows()
                .iter()
                .map(|r| r.entries().to_vec())
                .collect(),
            ..Self::default()
        }
    }
}

/// Outcome of one oracle check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub params: CheckParams,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    pub elapsed_ms: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// One JSON line per result.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("check results serialize")
    }
}

struct Reporter {
    check: &'static str,
    params: CheckParams,
    started: Instant,
}

impl Reporter {
    fn new(check: &'static str, params: CheckParams) -> Self {
        Self {
            check,
            params,
            started: Instant::now(),
        }
    }

    fn finish(self, witness: Option<String>) -> CheckResult {
        CheckResult {
            check: self.check.to_string(),
            params: self.params,
            verdict: if witness.is_none() {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            witness,
            elapsed_ms: self.started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

fn stabilizer_indices(q: &crate::group::QuotientGroup) -> Vec<usize> {
    (0..q.len())
        .filter(|&i| {
            q.elements()[i]
                .label(&[])
                .map(|l| l.is_identity())
                .unwrap_or(false)
        })
        .collect()
}

/// Both directions of the coordinate description of the first-level
/// stabilizer, verified on the whole enumerated quotient at the given depth:
/// every stabilizer word decomposes with `abelianize(g|_k) = (s_k, n_k)`,
/// and every choice of slot vectors yields a word landing in the quotient.
/// For symmetric rank-1 groups the coset degree of every group word must
/// also vanish (and match the `c`-exponent sum on regularisation words).
pub fn check_global_equations(group: &MggsGroup, depth: usize, seed: u64) -> Result<CheckResult> {
    let mut params = CheckParams::for_group(group);
    params.depth = Some(depth);
    params.seed = Some(seed);
    let rep = Reporter::new("global_equations", params);
    let witness = global_equations_witness(group, depth, seed, false)?;
    Ok(rep.finish(witness))
}

/// The same check run against a deliberately corrupted forced-exponent
/// formula (indices shifted by one). A sound oracle must fail and produce a
/// witness here.
pub fn check_global_equations_mutated(
    group: &MggsGroup,
    depth: usize,
    seed: u64,
) -> Result<CheckResult> {
    let mut params = CheckParams::for_group(group);
    params.depth = Some(depth);
    params.seed = Some(seed);
    let rep = Reporter::new("global_equations_mutated", params);
    let witness = global_equations_witness(group, depth, seed, true)?;
    Ok(rep.finish(witness))
}

/// Wraps the mutated check for use inside batteries: it passes exactly when
/// the corrupted formula was caught, and fails when the corruption slipped
/// through undetected.
pub fn check_global_equations_mutation_control(
    group: &MggsGroup,
    depth: usize,
    seed: u64,
) -> Result<CheckResult> {
    let inner = check_global_equations_mutated(group, depth, seed)?;
    let witness = if inner.passed() {
        Some("the corrupted exponent formula was not caught".to_string())
    } else {
        None
    };
    Ok(CheckResult {
        check: "global_equations_mutation_control".to_string(),
        params: inner.params,
        verdict: if witness.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        witness,
        elapsed_ms: inner.elapsed_ms,
    })
}

fn forced_a_coords_mutated(n: &[FpVec], group: &MggsGroup) -> Result<Vec<u64>> {
    let p = group.p() as usize;
    let mut s = vec![0u64; p];
    for (k, sk) in s.iter_mut().enumerate() {
        for (i, ni) in n.iter().enumerate() {
            // Off-by-one corruption: e_{k-i+1} instead of e_{k-i}.
            let col = (k + p - i + 1) % p;
            *sk = add_mod(*sk, ni.dot(&group.column(col))?, group.p());
        }
    }
    Ok(s)
}

fn global_equations_witness(
    group: &MggsGroup,
    depth: usize,
    seed: u64,
    mutate: bool,
) -> Result<Option<String>> {
    let p = group.p();
    let gens = group.regularisation_gens()?;
    let q = enumerate_quotient(group, &gens, depth, QuotientBudget::default())?;
    // Direction 1: decompose every enumerated stabilizer word.
    for idx in stabilizer_indices(&q) {
        let w = q.word_for(idx);
        let coords = b_coordinates(&w, group)?;
        let forced = if mutate {
            forced_a_coords_mutated(&coords.n, group)?
        } else {
            coords.s.clone()
        };
        let sections = w.sections_of_word(group)?;
        for k in 0..p as usize {
            let (a_exp, b_vec) = sections[k].abelianize()?;
            if a_exp != forced[k] || b_vec != coords.n[k] {
                return Ok(Some(format!(
                    "word `{w}` slot {k}: sections abelianize to ({a_exp}, {:?}), coordinates \
                     give ({}, {:?})",
                    b_vec.entries(),
                    forced[k],
                    coords.n[k].entries()
                )));
            }
        }
        if !mutate {
            for y in &coords.l_words {
                let (a_exp, b_vec) = y.abelianize()?;
                if a_exp != 0 || !b_vec.is_zero() {
                    return Ok(Some(format!(
                        "word `{w}`: residual `{y}` does not abelianize to zero"
                    )));
                }
            }
            if group.classification() == Classification::Symmetric && group.rank() == 1 {
                let c_sum: i64 = w
                    .syllables()
                    .iter()
                    .map(|s| if let Gen::C(k) = s { *k } else { 0 })
                    .sum();
                let degree = regularisation_degree(&w, group)?;
                if degree != c_sum.rem_euclid(p as i64) as u64 {
                    return Ok(Some(format!(
                        "word `{w}`: coset degree {degree} differs from its c-exponent sum"
                    )));
                }
            }
        }
    }
    // Direction 2: every choice of slot vectors is realized by a word whose
    // evaluation lies in the quotient. Exhaustive for p = 3, sampled above.
    let tuples: Vec<Vec<FpVec>> = if p == 3 && group.rank() == 1 {
        let mut all = Vec::new();
        for n0 in 0..p as i64 {
            for n1 in 0..p as i64 {
                for n2 in 0..p as i64 {
                    all.push(vec![
                        FpVec::new(p, [n0]),
                        FpVec::new(p, [n1]),
                        FpVec::new(p, [n2]),
                    ]);
                }
            }
        }
        all
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..50)
            .map(|_| {
                (0..p as usize)
                    .map(|_| {
                        FpVec::new(
                            p,
                            (0..group.rank())
                                .map(|_| rng.gen_range(0..p) as i64)
                                .collect::<Vec<_>>(),
                        )
                    })
                    .collect()
            })
            .collect()
    };
    for n in tuples {
        let w = coordinate_word(&n, group)?;
        let portrait = w.evaluate(group, depth)?;
        if !member_at_depth(&portrait, &q)? {
            return Ok(Some(format!(
                "coordinate word `{w}` evaluates outside the quotient"
            )));
        }
        let coords = b_coordinates(&w, group)?;
        if coords.n != n {
            return Ok(Some(format!(
                "coordinate word `{w}` reads back the wrong slot vectors"
            )));
        }
        if coords.s != forced_a_coords(&n, group)? {
            return Ok(Some(format!(
                "coordinate word `{w}` reads back the wrong forced exponents"
            )));
        }
    }
    Ok(None)
}

fn random_ab_word(rng: &mut ChaCha8Rng, group: &MggsGroup, max_b: usize) -> Word {
    let p = group.p();
    let r = group.rank();
    let mut w = Word::empty(p, r);
    let nb = rng.gen_range(1..=max_b);
    for _ in 0..nb {
        if rng.gen_bool(0.7) {
            w = w
                .concat(&Word::a(p, r, rng.gen_range(1..p) as i64))
                .expect("same context");
        }
        let mut v = vec![0i64; r];
        while v.iter().all(|&x| x == 0) {
            for e in v.iter_mut() {
                *e = rng.gen_range(0..p) as i64;
            }
        }
        w = w
            .concat(&Word::b(p, r, FpVec::new(p, v)))
            .expect("same context");
    }
    w
}

fn random_stabilizer_word(rng: &mut ChaCha8Rng, group: &MggsGroup, max_b: usize) -> Word {
    let w = random_ab_word(rng, group, max_b);
    let t = w.total_a_exponent();
    w.concat(&Word::a(group.p(), group.rank(), -(t as i64)))
        .expect("same context")
}

/// Conjugator construction for sampled order-p elements `a·g` with
/// `g = [a, x]`: the built `h` must satisfy `a^h = a·g` as portraits and
/// land in the depth-2 quotient of the regularisation. For symmetric
/// rank-1 groups the explicit stabilizer counterexample is also confirmed:
/// its conjugator exists in the regularisation but an exhaustive scan of
/// the depth-2 quotient shows no first-level stabilizer of the group itself
/// conjugates `a` onto it.
pub fn check_order_p_prop(
    group: &MggsGroup,
    trials: usize,
    depth: usize,
    seed: u64,
) -> Result<CheckResult> {
    let mut params = CheckParams::for_group(group);
    params.depth = Some(depth);
    params.trials = Some(trials);
    params.seed = Some(seed);
    let rep = Reporter::new("order_p_conjugation", params);
    let p = group.p();
    let r = group.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q_reg = enumerate_quotient(
        group,
        &group.regularisation_gens()?,
        2,
        QuotientBudget::default(),
    )?;
    let a_word = Word::a(p, r, 1);
    let a_port = a_word.evaluate(group, depth)?;
    for trial in 0..trials {
        let x = random_ab_word(&mut rng, group, 4);
        let g = a_word.commutator(&x)?;
        let conj = order_p_conjugator(&g, group, depth)?;
        let h = conj.portrait(group, depth)?;
        let ag = a_port.compose(&g.evaluate(group, depth)?)?;
        if a_port.conjugate(&h)? != ag {
            return Ok(rep.finish(Some(format!(
                "trial {trial}: conjugator for g = [a, {x}] does not conjugate a onto a·g"
            ))));
        }
        if !member_at_depth(&h.truncate(2), &q_reg)? {
            return Ok(rep.finish(Some(format!(
                "trial {trial}: conjugator for g = [a, {x}] is outside the depth-2 quotient"
            ))));
        }
    }
    if group.classification() == Classification::Symmetric && r == 1 {
        if let Some(w) = symmetric_counterexample_witness(group, depth, &q_reg)? {
            return Ok(rep.finish(Some(w)));
        }
    }
    Ok(rep.finish(None))
}

/// The symmetric stabilizer counterexample: `d = [b, b^a]` has the section
/// tuple `([b,a], [b,a]^{-1}, id, …, id)`; the element `a·d` has order p and
/// is conjugate to `a` in the regularisation but not by any first-level
/// stabilizer of the group. Any conjugating `h` has sections
/// `h|_k = z·d|_1⋯d|_k` for some `z`, and the scan shows the coset degree of
/// every such candidate is nonzero.
fn symmetric_counterexample_witness(
    group: &MggsGroup,
    depth: usize,
    q_reg: &crate::group::QuotientGroup,
) -> Result<Option<String>> {
    let p = group.p();
    let b = Word::b_basis(p, 1, 0);
    let a = Word::a(p, 1, 1);
    let d = b.commutator(&b.conjugate(&a)?)?;
    let comm = b.commutator(&a)?;
    // Sections of d are ([b,a], [b,a]^{-1}, id, …, id).
    let d_port = d.evaluate(group, depth)?;
    let mut expected = vec![Portrait::identity(p, depth - 1); p as usize];
    expected[0] = comm.evaluate(group, depth - 1)?;
    expected[1] = comm.inverse().evaluate(group, depth - 1)?;
    if d_port != Portrait::from_sections(p, &expected)? {
        return Ok(Some("d = [b, b^a] has unexpected sections".into()));
    }
    // The construction conjugates a onto a·d inside the regularisation.
    let conj = order_p_conjugator(&d, group, depth)?;
    let h = conj.portrait(group, depth)?;
    let a_port = a.evaluate(group, depth)?;
    let ad = a_port.compose(&d_port)?;
    if a_port.conjugate(&h)? != ad {
        return Ok(Some(
            "constructed conjugator fails on the counterexample".into(),
        ));
    }
    let mut h_word = Word::empty(p, 1);
    for j in 1..p as i64 {
        h_word = h_word.concat(&Word::c(p, 1, -1).conjugate(&Word::a(p, 1, j))?)?;
    }
    if h_word.evaluate(group, depth)? != h {
        return Ok(Some(
            "constructed conjugator does not match its regularisation word".into(),
        ));
    }
    if !member_at_depth(&h.truncate(2), q_reg)? {
        return Ok(Some(
            "constructed conjugator is outside the regularisation quotient".into(),
        ));
    }
    // Exhaustive scan over the depth-2 quotient: a^h = a·d forces
    // h|_k = z·d|_1⋯d|_k with z = h|_0, and membership of h in the group
    // itself forces zero coset degree, which never happens.
    let q = enumerate_quotient(
        group,
        &group.generator_words(),
        2,
        QuotientBudget::default(),
    )?;
    let comm_inv = comm.inverse();
    let mut candidates = 0usize;
    for idx in 0..q.len() {
        let z = q.word_for(idx);
        let mut sections = Vec::with_capacity(p as usize);
        sections.push(z.clone());
        for _ in 1..p {
            sections.push(z.concat(&comm_inv)?);
        }
        match regularisation_degree_from_sections(&sections, group) {
            Err(Error::Precondition(_)) => {
                // Exponent bookkeeping already rules this z out.
            }
            Err(e) => return Err(e),
            Ok(0) => {
                return Ok(Some(format!(
                    "stabilizer candidate with h|_0 = `{z}` has coset degree 0: a conjugator \
                     inside the group itself would exist"
                )));
            }
            Ok(_) => {
                candidates += 1;
            }
        }
    }
    if candidates == 0 {
        return Ok(Some("counterexample scan tested no candidates".into()));
    }
    Ok(None)
}

/// Diagonal closure identities: `κ_1(a^{s} b^{s_j})` lies in the quotient of
/// the regularisation, the commutator of a directed generator with `κ_n(a)`
/// collapses onto the spine, and for symmetric groups the defining identity
/// of `c` and the failure of `κ_1(a)` to normalize are both verified.
pub fn check_kappa_closure(group: &MggsGroup, depth: usize) -> Result<CheckResult> {
    let mut params = CheckParams::for_group(group);
    params.depth = Some(depth);
    let rep = Reporter::new("kappa_closure", params);
    let p = group.p();
    let r = group.rank();
    let q_reg = enumerate_quotient(
        group,
        &group.regularisation_gens()?,
        depth,
        QuotientBudget::default(),
    )?;
    for j in 0..r {
        let row_sum: u64 = (1..p).fold(0, |acc, c| {
            add_mod(acc, group.matrix().row(j).get(c as usize - 1), p)
        });
        let base = Word::a(p, r, row_sum as i64).concat(&Word::b_basis(p, r, j))?;
        let diag = kappa(1, &base.evaluate(group, depth.saturating_sub(1))?);
        if !member_at_depth(&diag, &q_reg)? {
            return Ok(rep.finish(Some(format!(
                "κ_1(a^{row_sum} b_{}) is outside the depth-{} quotient",
                j + 1,
                depth
            ))));
        }
        if row_sum != 0 && depth >= 3 {
            // Without the rooted correction the diagonal must fall outside.
            let bare = kappa(
                1,
                &Word::b_basis(p, r, j).evaluate(group, depth.saturating_sub(1))?,
            );
            if member_at_depth(&bare, &q_reg)? {
                return Ok(rep.finish(Some(format!(
                    "κ_1(b_{}) lies in the quotient although its forced exponent is {row_sum}",
                    j + 1
                ))));
            }
        }
    }
    // Portrait-exact identities need no enumeration and run at depth >= 3
    // even when the membership checks above are limited to depth 2.
    let id_depth = depth.max(3);
    // Commutator with the diagonal collapses onto the spine:
    // [b^{s_j}, κ_n(a)] equals the element with section [b^{s_j}, a] at 0^n.
    let a_word = Word::a(p, r, 1);
    for j in 0..r {
        let bj = Word::b_basis(p, r, j);
        for n in 1..id_depth {
            let lhs = bj.evaluate(group, id_depth)?.commutator(&kappa(
                n,
                &rooted(p, id_depth - n, AffineLabel::translation(1)),
            ))?;
            let inner = bj.commutator(&a_word)?.evaluate(group, id_depth - n)?;
            let rhs = Portrait::embed_at(&vec![0u64; n], &inner);
            if lhs != rhs {
                return Ok(rep.finish(Some(format!(
                    "[b_{}, κ_{n}(a)] does not collapse onto the spine",
                    j + 1
                ))));
            }
        }
    }
    if group.classification() == Classification::Symmetric && r == 1 {
        let b = Word::b_basis(p, 1, 0);
        let c = Word::c(p, 1, 1);
        let k1a = kappa(1, &rooted(p, id_depth - 1, AffineLabel::translation(1)));
        // [b, κ_1(a)] = c.
        if b.evaluate(group, id_depth)?.commutator(&k1a)? != c.evaluate(group, id_depth)? {
            return Ok(rep.finish(Some("[b, κ_1(a)] differs from c".into())));
        }
        // [κ_2(a), κ_1(b)] = κ_1(c).
        let k2a = kappa(2, &rooted(p, id_depth - 2, AffineLabel::translation(1)));
        let k1b = kappa(1, &b.evaluate(group, id_depth - 1)?);
        let k1c = kappa(1, &c.evaluate(group, id_depth - 1)?);
        if k2a.commutator(&k1b)? != k1c {
            return Ok(rep.finish(Some("[κ_2(a), κ_1(b)] differs from κ_1(c)".into())));
        }
        // κ_1(a) does not normalize the group: b^{κ_1(a)} = b·c and c has
        // coset degree 1, so the conjugate leaves the group.
        let b_conj = b.evaluate(group, id_depth)?.conjugate(&k1a)?;
        if b_conj != b.concat(&c)?.evaluate(group, id_depth)? {
            return Ok(rep.finish(Some("b^{κ_1(a)} differs from b·c".into())));
        }
        if regularisation_degree(&Word::c(p, 1, 1), group)? == 0 {
            return Ok(rep.finish(Some("c unexpectedly has coset degree 0".into())));
        }
    }
    Ok(rep.finish(None))
}

fn affine_labels(p: u64) -> Vec<AffineLabel> {
    let mut out = Vec::new();
    for u in 1..p {
        for t in 0..p {
            out.push(AffineLabel { u, t });
        }
    }
    out
}

fn centralizes_shape(g: &Portrait, depth: usize) -> bool {
    normalizes_shape(g, depth) && g.label(&[]).map(|l| l.u == 1).unwrap_or(false)
}

fn normalizes_shape(g: &Portrait, depth: usize) -> bool {
    let p = g.p();
    if depth >= 2 {
        let level1 = g.level_labels(1);
        if level1.iter().any(|l| *l != level1[0]) {
            return false;
        }
    }
    if depth >= 3 {
        let level2 = g.level_labels(2);
        let block = p as usize;
        for i in 1..block {
            if level2[i * block..(i + 1) * block] != level2[..block] {
                return false;
            }
        }
    }
    true
}

/// The shape of the centralizer and normalizer of the rooted cycle on the
/// ternary tree: a truncated portrait commutes with `a` exactly when it has
/// the diagonal shape `κ_1(h)·a^k`, and normalizes `a` exactly when an
/// arbitrary affine root label is allowed on top of the diagonal shape.
/// Exhaustive at depth 2, sampled plus structured families at depth 3.
pub fn check_centralizer_normalizer_a(depth: usize, seed: u64) -> Result<CheckResult> {
    let p = 3u64;
    let params = CheckParams {
        p,
        depth: Some(depth),
        seed: Some(seed),
        ..CheckParams::default()
    };
    let rep = Reporter::new("centralizer_normalizer_a", params);
    if !(2..=3).contains(&depth) {
        return Err(Error::ResourceBudget(
            "centralizer scan supports depths 2 and 3".into(),
        ));
    }
    let labels = affine_labels(p);
    let a = rooted(p, depth, AffineLabel::translation(1));
    let check_one = |g: &Portrait| -> Result<Option<String>> {
        let conj = a.conjugate(g)?;
        let centralizes = conj == a;
        let normalizes = (1..p).any(|j| a.pow(j as i64).map(|aj| aj == conj).unwrap_or(false));
        if centralizes != centralizes_shape(g, depth) {
            return Ok(Some(format!(
                "centralizer shape mismatch at depth {depth}: labels {:?}",
                g.canon_key()
            )));
        }
        if normalizes != normalizes_shape(g, depth) {
            return Ok(Some(format!(
                "normalizer shape mismatch at depth {depth}: labels {:?}",
                g.canon_key()
            )));
        }
        Ok(None)
    };
    if depth == 2 {
        // Exhaustive over all affine-labelled portraits.
        let len2 = portrait_len(p, 2);
        let verts2: Vec<Vec<u64>> = {
            let mut v = vec![vec![]];
            for i in 0..p {
                v.push(vec![i]);
            }
            v
        };
        let mut counter = vec![0usize; len2];
        loop {
            let mut g = Portrait::identity(p, 2);
            for (idx, vertex) in verts2.iter().enumerate() {
                g.set_label(vertex, labels[counter[idx]]);
            }
            if let Some(w) = check_one(&g)? {
                return Ok(rep.finish(Some(w)));
            }
            let mut pos = 0;
            while pos < len2 {
                counter[pos] += 1;
                if counter[pos] < labels.len() {
                    break;
                }
                counter[pos] = 0;
                pos += 1;
            }
            if pos == len2 {
                break;
            }
        }
    }
    if depth == 3 {
        let verts3: Vec<Vec<u64>> = {
            let mut v = vec![vec![]];
            for i in 0..p {
                v.push(vec![i]);
                for j in 0..p {
                    v.push(vec![i, j]);
                }
            }
            v
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_portrait = |rng: &mut ChaCha8Rng| {
            let mut g = Portrait::identity(p, 3);
            for vertex in &verts3 {
                g.set_label(vertex, labels[rng.gen_range(0..labels.len())]);
            }
            g
        };
        for _ in 0..3000 {
            let g = random_portrait(&mut rng);
            if let Some(w) = check_one(&g)? {
                return Ok(rep.finish(Some(w)));
            }
        }
        // Structured families: every diagonal κ_1(h)·a^k centralizes, every
        // rooted multiplication normalizes without centralizing, and a
        // one-label perturbation of the diagonal breaks centralization at
        // some depth.
        for _ in 0..200 {
            let inner = random_portrait(&mut rng).truncate(2);
            let k = rng.gen_range(0..p);
            let g = kappa(1, &inner).compose(&rooted(p, 3, AffineLabel::translation(k)))?;
            if a.conjugate(&g)? != a {
                return Ok(rep.finish(Some(
                    "a diagonal element with a rooted shift fails to centralize".into(),
                )));
            }
        }
        for u in 2..p {
            let d = rooted(p, 3, AffineLabel::scaling(u));
            let conj = a.conjugate(&d)?;
            let normalizes = (1..p).any(|j| a.pow(j as i64).map(|aj| aj == conj).unwrap_or(false));
            if conj == a || !normalizes {
                return Ok(rep.finish(Some(format!(
                    "rooted multiplication by {u} does not normalize correctly"
                ))));
            }
        }
        for _ in 0..200 {
            // Non-constant level-1 labels must fail to centralize.
            let mut g = kappa(1, &random_portrait(&mut rng).truncate(2));
            let old = g.label(&[0]).unwrap();
            let mut new = old;
            while new == old {
                new = labels[rng.gen_range(0..labels.len())];
            }
            g.set_label(&[0], new);
            if a.conjugate(&g)? == a {
                return Ok(rep.finish(Some("perturbed level-1 labels still centralize".into())));
            }
        }
    }
    Ok(rep.finish(None))
}

/// Expression-level contraction: for random reduced stabilizer words the
/// section lengths satisfy `Σ_k len(g|_k) ≤ len(g) + p - 1`, and some
/// nonzero slot shortens `g|_0 · g|_i^{-1}` strictly.
pub fn check_contraction(group: &MggsGroup, trials: usize, seed: u64) -> Result<CheckResult> {
    let mut params = CheckParams::for_group(group);
    params.trials = Some(trials);
    params.seed = Some(seed);
    let rep = Reporter::new("contraction", params);
    let p = group.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let w = random_stabilizer_word(&mut rng, group, 6);
        let sections = w.sections_of_word(group)?;
        let total: usize = sections.iter().map(Word::syllable_length).sum();
        if total > w.syllable_length() + (p as usize - 1) {
            return Ok(rep.finish(Some(format!(
                "trial {trial}: `{w}` has section lengths summing to {total} > {} + p - 1",
                w.syllable_length()
            ))));
        }
        if w.syllable_length() > 1 {
            let shortened = (1..p as usize).any(|i| {
                sections[0]
                    .concat(&sections[i].inverse())
                    .map(|prod| prod.syllable_length() < w.syllable_length())
                    .unwrap_or(false)
            });
            if !shortened {
                return Ok(rep.finish(Some(format!("trial {trial}: no slot shortens `{w}`"))));
            }
        }
    }
    Ok(rep.finish(None))
}

/// Assorted algebraic properties: evaluation is a homomorphism, sections of
/// products factor through images, the depth-2 quotient abelianizes onto
/// `F_p^{r+1}`, and words over the group alphabet only produce shift labels
/// while multiplication sequences only produce scaling labels.
pub fn check_property_suite(group: &MggsGroup, trials: usize, seed: u64) -> Result<CheckResult> {
    let mut params = CheckParams::for_group(group);
    params.trials = Some(trials);
    params.seed = Some(seed);
    let rep = Reporter::new("property_suite", params);
    let p = group.p();
    let depth = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let w1 = random_ab_word(&mut rng, group, 3);
        let w2 = random_ab_word(&mut rng, group, 3);
        let lhs = w1.concat(&w2)?.evaluate(group, depth)?;
        let g = w1.evaluate(group, depth)?;
        let h = w2.evaluate(group, depth)?;
        if lhs != g.compose(&h)? {
            return Ok(rep.finish(Some(format!(
                "trial {trial}: evaluation is not multiplicative on `{w1}`, `{w2}`"
            ))));
        }
        for k in 0..p {
            let v = [k];
            let sec = lhs.section(&v)?;
            let img = g.apply(&v)?;
            if sec != g.section(&v)?.compose(&h.section(&img)?)? {
                return Ok(rep.finish(Some(format!(
                    "trial {trial}: section of product fails at vertex {k}"
                ))));
            }
        }
        for l in g.level_labels(1).iter().chain(g.level_labels(2)) {
            if l.u != 1 {
                return Ok(rep.finish(Some(format!(
                    "trial {trial}: group word produced a non-shift label"
                ))));
            }
        }
    }
    // Abelianization of the depth-2 quotient spans F_p^{r+1}.
    let q = enumerate_quotient(
        group,
        &group.generator_words(),
        2,
        QuotientBudget::default(),
    )?;
    let mut images = Vec::new();
    for idx in 0..q.len() {
        let (a_exp, b_vec) = q.word_for(idx).abelianize()?;
        let mut row = vec![a_exp];
        row.extend_from_slice(b_vec.entries());
        images.push(FpVec::from_raw(p, row));
        if images.len() >= 4 * (group.rank() + 1) {
            break;
        }
    }
    let rank = crate::fpalg::FpMat::new(p, images)?.rank();
    if rank != group.rank() + 1 {
        return Ok(rep.finish(Some(format!(
            "abelianized quotient has rank {rank}, expected {}",
            group.rank() + 1
        ))));
    }
    // Sequences of rooted multiplications only produce scaling labels.
    let seq = crate::autgrp::NormalizerSequence::from_values(p, vec![], vec![p - 1])?;
    let port = seq.portrait(3);
    for level in 0..3 {
        for l in port.level_labels(level) {
            if l.t != 0 {
                return Ok(rep.finish(Some(
                    "a multiplication sequence produced a shift label".into(),
                )));
            }
        }
    }
    Ok(rep.finish(None))
}

/// The normalizing sequences with labels in the multiplications: all
/// `|U|·|W|` parameter pairs produce sequences, each passes the conjugation
/// check, and the depth-2 portraits are pairwise distinct. A constant
/// sequence outside `U` must fail the check.
pub fn check_normalizer_family(group: &MggsGroup, depth: usize) -> Result<CheckResult> {
    let mut params = CheckParams::for_group(group);
    params.depth = Some(depth);
    let rep = Reporter::new("normalizer_family", params);
    let p = group.p();
    let u_set = compute_u(group)?;
    let (_, scalars) = compute_v(group, &u_set)?;
    let w_set = compute_w(&scalars, p);
    let mut portraits = std::collections::BTreeSet::new();
    let mut count = 0usize;
    for &d0 in &u_set {
        for &w in &w_set {
            let seq = crate::autgrp::normalizer_sequence(
                group,
                crate::fpalg::Unit::new(d0 as i64, p)?,
                crate::fpalg::Unit::new(w as i64, p)?,
            )?;
            let check = crate::autgrp::normalizer_conjugation_check(&seq, group, depth)?;
            if !check.passed {
                return Ok(rep.finish(Some(format!(
                    "pair (d0 = {d0}, w = {w}): {}",
                    check.witness.unwrap_or_default()
                ))));
            }
            portraits.insert(seq.portrait(2).canon_key());
            count += 1;
        }
    }
    if count != u_set.len() * w_set.len() || portraits.len() != count {
        return Ok(rep.finish(Some(format!(
            "expected {} distinct sequences, got {} with {} distinct portraits",
            u_set.len() * w_set.len(),
            count,
            portraits.len()
        ))));
    }
    // A unit outside U must fail the conjugation check.
    if let Some(bad) = (1..p).find(|u| !u_set.contains(u)) {
        let seq = crate::autgrp::NormalizerSequence::from_values(p, vec![], vec![bad])?;
        let check = crate::autgrp::normalizer_conjugation_check(&seq, group, depth)?;
        if check.passed {
            return Ok(rep.finish(Some(format!(
                "constant sequence of {bad} outside U passes the conjugation check"
            ))));
        }
    }
    Ok(rep.finish(None))
}

/// Runs the whole battery on the standard catalog of groups and returns one
/// result per check. All randomness is derived from the given seed. The
/// deliberately mutated variant enters through its control wrapper, which
/// passes exactly when the corruption was caught.
pub fn run_all(seed: u64) -> Result<Vec<CheckResult>> {
    let gs3 = MggsGroup::new(3, vec![FpVec::new(3, [1, 2])])?;
    let sym5 = MggsGroup::new(5, vec![FpVec::new(5, [1, 2, 2, 1])])?;
    let gs5 = MggsGroup::new(5, vec![FpVec::new(5, [1, 4, 0, 0])])?;
    let max5 = MggsGroup::new(5, vec![FpVec::new(5, [1, 2, 3, 4])])?;
    let full3 = MggsGroup::full_space(3)?;
    let spine3 = MggsGroup::new(3, vec![FpVec::new(3, [1, 0])])?;
    let mut out = Vec::new();
    out.push(check_global_equations(&gs3, 2, seed)?);
    out.push(check_global_equations(&gs3, 3, seed)?);
    out.push(check_global_equations(&sym5, 2, seed)?);
    out.push(check_global_equations_mutation_control(&gs3, 2, seed)?);
    out.push(check_order_p_prop(&gs3, 40, 3, seed)?);
    out.push(check_order_p_prop(&sym5, 40, 3, seed ^ 1)?);
    out.push(check_order_p_prop(&gs5, 40, 3, seed ^ 2)?);
    out.push(check_kappa_closure(&gs3, 3)?);
    out.push(check_kappa_closure(&sym5, 2)?);
    out.push(check_kappa_closure(&spine3, 3)?);
    out.push(check_centralizer_normalizer_a(2, seed)?);
    out.push(check_centralizer_normalizer_a(3, seed)?);
    out.push(check_contraction(&gs3, 1000, seed)?);
    out.push(check_contraction(&sym5, 1000, seed ^ 3)?);
    for g in [&gs3, &sym5, &gs5, &max5, &full3] {
        out.push(check_property_suite(g, 60, seed ^ 4)?);
    }
    for g in [&sym5, &max5, &full3] {
        out.push(check_normalizer_family(g, 2)?);
    }
    Ok(out)
}
