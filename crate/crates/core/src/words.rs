//! Symbolic words over the generator alphabet.
//!
//! A [`Word`] is a sequence of syllables: powers of the rooted cycle `a`,
//! directed generators `b^n` for `n` in `F_p^r`, powers of the extra
//! generator `c` used by the regularisation, and powers of the diagonal
//! generators `κ_m(a)`. Words reduce freely (adjacent syllables of the same
//! kind merge), evaluate exactly to portraits, and for first-level
//! stabilizer words the sections are themselves computed as words.
//!
//! Exponents of `a`, `b` and `κ_m(a)` live mod p since those elements have
//! order p; `c` has unbounded order, so its exponents are kept as plain
//! integers and merged additively.

use crate::error::{Error, Result};
use crate::fpalg::{add_mod, neg_mod, FpVec};
use crate::group::MggsGroup;
use crate::tree::{kappa, rooted, AffineLabel, Portrait};

/// One syllable of a generator word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gen {
    /// `a^k`, exponent mod p.
    A(u64),
    /// `b^n` for a vector `n` in `F_p^r`.
    B(FpVec),
    /// `c^k`; the exponent is not reduced because `c` has unbounded order.
    C(i64),
    /// `κ_m(a)^k` for a level `m ≥ 1`, exponent mod p.
    KappaA { level: usize, exp: u64 },
}

impl Gen {
    fn is_trivial(&self) -> bool {
        match self {
            Gen::A(k) => *k == 0,
            Gen::B(n) => n.is_zero(),
            Gen::C(k) => *k == 0,
            Gen::KappaA { exp, .. } => *exp == 0,
        }
    }
}

/// A freely reduced word over the generator alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    p: u64,
    r: usize,
    syllables: Vec<Gen>,
}

impl Word {
    /// Builds a word and reduces it. Syllable moduli must match `p`/`r`.
    pub fn new(p: u64, r: usize, syllables: Vec<Gen>) -> Result<Self> {
        for s in &syllables {
            match s {
                Gen::A(k) | Gen::KappaA { exp: k, .. } => {
                    if *k >= p {
                        return Err(Error::Parse(format!("exponent {k} not reduced mod {p}")));
                    }
                }
                Gen::B(n) => {
                    if n.modulus() != p {
                        return Err(Error::ModulusMismatch(p, n.modulus()));
                    }
                    if n.len() != r {
                        return Err(Error::Dimension {
                            expected: r,
                            got: n.len(),
                        });
                    }
                }
                Gen::C(_) => {}
            }
            if let Gen::KappaA { level, .. } = s {
                if *level == 0 {
                    return Err(Error::Parse("diagonal level must be >= 1".into()));
                }
            }
        }
        let mut w = Self { p, r, syllables };
        w.reduce_in_place();
        Ok(w)
    }

    pub fn empty(p: u64, r: usize) -> Self {
        Self {
            p,
            r,
            syllables: Vec::new(),
        }
    }

    /// `a^k` as a word.
    pub fn a(p: u64, r: usize, k: i64) -> Self {
        Self::new(p, r, vec![Gen::A(k.rem_euclid(p as i64) as u64)]).expect("valid syllable")
    }

    /// `b^n` as a word.
    pub fn b(p: u64, r: usize, n: FpVec) -> Self {
        Self::new(p, r, vec![Gen::B(n)]).expect("valid syllable")
    }

    /// `b^{s_j}` for the j-th standard basis vector (0-indexed).
    pub fn b_basis(p: u64, r: usize, j: usize) -> Self {
        let mut n = vec![0i64; r];
        n[j] = 1;
        Self::b(p, r, FpVec::new(p, n))
    }

    pub fn c(p: u64, r: usize, k: i64) -> Self {
        Self::new(p, r, vec![Gen::C(k)]).expect("valid syllable")
    }

    pub fn kappa_a(p: u64, r: usize, level: usize, k: i64) -> Self {
        Self::new(
            p,
            r,
            vec![Gen::KappaA {
                level,
                exp: k.rem_euclid(p as i64) as u64,
            }],
        )
        .expect("valid syllable")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn syllables(&self) -> &[Gen] {
        &self.syllables
    }

    /// Number of syllables of the reduced form.
    pub fn syllable_length(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    fn reduce_in_place(&mut self) {
        let p = self.p;
        let mut out: Vec<Gen> = Vec::with_capacity(self.syllables.len());
        for s in self.syllables.drain(..) {
            if s.is_trivial() {
                continue;
            }
            let merged = match (out.last_mut(), &s) {
                (Some(Gen::A(a)), Gen::A(b)) => {
                    *a = add_mod(*a, *b, p);
                    true
                }
                (Some(Gen::B(a)), Gen::B(b)) => {
                    *a = a.add(b);
                    true
                }
                (Some(Gen::C(a)), Gen::C(b)) => {
                    *a += *b;
                    true
                }
                (Some(Gen::KappaA { level: l1, exp: e1 }), Gen::KappaA { level: l2, exp: e2 })
                    if l1 == l2 =>
                {
                    *e1 = add_mod(*e1, *e2, p);
                    true
                }
                _ => false,
            };
            if merged && out.last().map(Gen::is_trivial).unwrap_or(false) {
                // A fully cancelled syllable exposes the previous stack top,
                // so later syllables can merge across it.
                out.pop();
            } else if !merged {
                out.push(s);
            }
        }
        self.syllables = out;
    }

    /// Freely reduced copy (words are kept reduced, so this is idempotent).
    pub fn reduce(&self) -> Word {
        let mut w = self.clone();
        w.reduce_in_place();
        w
    }

    /// Concatenation followed by reduction.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        if self.r != other.r {
            return Err(Error::Dimension {
                expected: self.r,
                got: other.r,
            });
        }
        let mut syl = self.syllables.clone();
        syl.extend(other.syllables.iter().cloned());
        Word::new(self.p, self.r, syl)
    }

    pub fn inverse(&self) -> Word {
        let p = self.p;
        let syl = self
            .syllables
            .iter()
            .rev()
            .map(|s| match s {
                Gen::A(k) => Gen::A(neg_mod(*k, p)),
                Gen::B(n) => Gen::B(n.neg()),
                Gen::C(k) => Gen::C(-*k),
                Gen::KappaA { level, exp } => Gen::KappaA {
                    level: *level,
                    exp: neg_mod(*exp, p),
                },
            })
            .collect();
        Word::new(p, self.r, syl).expect("inverse of valid word")
    }

    /// `self^h = h^{-1} · self · h`.
    pub fn conjugate(&self, h: &Word) -> Result<Word> {
        h.inverse().concat(self)?.concat(h)
    }

    /// `[self, other] = self^{-1} other^{-1} self other`.
    pub fn commutator(&self, other: &Word) -> Result<Word> {
        self.inverse()
            .concat(&other.inverse())?
            .concat(self)?
            .concat(other)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::empty(self.p, self.r);
        for _ in 0..k.unsigned_abs() {
            acc = acc.concat(&base).expect("same group context");
        }
        acc
    }

    /// Total exponent of `a` mod p, counting only `A` syllables (the other
    /// kinds stabilize the first level).
    pub fn total_a_exponent(&self) -> u64 {
        self.syllables.iter().fold(0, |acc, s| match s {
            Gen::A(k) => add_mod(acc, *k, self.p),
            _ => acc,
        })
    }

    /// Image in `G/G' ≅ F_p^{r+1}`: the sum of `a`-exponents and the sum of
    /// `b`-vectors. Words must not contain `c` or diagonal syllables.
    pub fn abelianize(&self) -> Result<(u64, FpVec)> {
        let mut a = 0u64;
        let mut b = FpVec::zero(self.p, self.r);
        for s in &self.syllables {
            match s {
                Gen::A(k) => a = add_mod(a, *k, self.p),
                Gen::B(n) => b = b.add(n),
                other => {
                    return Err(Error::ForeignSyllable(format!("{other:?}")));
                }
            }
        }
        Ok((a, b))
    }

    /// Exponent of the basic commutator `[b, a]` in the free class-2 image
    /// of a rank-1 word with vanishing exponent sums: collecting all
    /// `a`-syllables to the front of `w = Π a^{α_t} b^{β_t}` produces
    /// `[b,a]^φ` with `φ = Σ_t β_t · (sum of α after position t)`.
    pub fn commutator_exponent(&self) -> Result<u64> {
        if self.r != 1 {
            return Err(Error::Precondition(
                "commutator exponent is defined for rank-1 words".into(),
            ));
        }
        let (asum, bsum) = self.abelianize()?;
        if asum != 0 || !bsum.is_zero() {
            return Err(Error::Precondition(
                "commutator exponent needs vanishing exponent sums".into(),
            ));
        }
        let p = self.p;
        let mut suffix = 0u64;
        let mut phi = 0u64;
        for s in self.syllables.iter().rev() {
            match s {
                Gen::A(k) => suffix = add_mod(suffix, *k, p),
                Gen::B(n) => {
                    phi = add_mod(phi, crate::fpalg::mul_mod(n.get(0), suffix, p), p);
                }
                other => return Err(Error::ForeignSyllable(format!("{other:?}"))),
            }
        }
        Ok(phi)
    }

    /// Exact evaluation to a portrait of the given depth.
    pub fn evaluate(&self, group: &MggsGroup, depth: usize) -> Result<Portrait> {
        if group.p() != self.p || group.rank() != self.r {
            return Err(Error::ModulusMismatch(group.p(), self.p));
        }
        let mut acc = Portrait::identity(self.p, depth);
        for s in &self.syllables {
            let g = gen_portrait(s, group, depth)?;
            acc = acc.compose(&g)?;
        }
        Ok(acc)
    }

    /// Section words of a first-level stabilizer word: the k-th entry
    /// evaluates to `section(evaluate(self), [k])`.
    ///
    /// Each `b^n` syllable at cumulative shift `c` contributes `b^n` to the
    /// section at `-c mod p` and the rooted power `a^{n·e_{k+c}}` to every
    /// other section `k`; `c^j` routes its defining commutator the same way,
    /// and `κ_m(a)` drops one level on every section.
    pub fn sections_of_word(&self, group: &MggsGroup) -> Result<Vec<Word>> {
        let p = self.p;
        let total = self.total_a_exponent();
        if total != 0 {
            return Err(Error::NotStabilizer(total));
        }
        let mut sections: Vec<Vec<Gen>> = vec![Vec::new(); p as usize];
        let mut shift = 0u64;
        for s in &self.syllables {
            match s {
                Gen::A(k) => shift = add_mod(shift, *k, p),
                Gen::B(n) => {
                    for k in 0..p {
                        let col = add_mod(k, shift, p);
                        if col == 0 {
                            sections[k as usize].push(Gen::B(n.clone()));
                        } else {
                            let e = group.column(col as usize);
                            sections[k as usize].push(Gen::A(n.dot(&e)?));
                        }
                    }
                }
                Gen::C(j) => {
                    let target = neg_mod(shift, p);
                    let comm = group.c_section_word().pow(*j);
                    sections[target as usize].extend(comm.syllables.iter().cloned());
                }
                Gen::KappaA { level, exp } => {
                    for sec in sections.iter_mut() {
                        if *level == 1 {
                            sec.push(Gen::A(*exp));
                        } else {
                            sec.push(Gen::KappaA {
                                level: level - 1,
                                exp: *exp,
                            });
                        }
                    }
                }
            }
        }
        sections
            .into_iter()
            .map(|syl| Word::new(p, self.r, syl))
            .collect()
    }
}

fn gen_portrait(g: &Gen, group: &MggsGroup, depth: usize) -> Result<Portrait> {
    let p = group.p();
    match g {
        Gen::A(k) => Ok(rooted(p, depth, AffineLabel::translation(*k))),
        Gen::B(n) => group.b_portrait(n, depth),
        Gen::C(k) => {
            if depth == 0 {
                return Ok(Portrait::identity(p, 0));
            }
            let inner = group.c_section_word().pow(*k).evaluate(group, depth - 1)?;
            Ok(Portrait::embed_at(&[0], &inner).truncate(depth))
        }
        Gen::KappaA { level, exp } => {
            if *level >= depth {
                return Ok(Portrait::identity(p, depth));
            }
            Ok(kappa(
                *level,
                &rooted(p, depth - level, AffineLabel::translation(*exp)),
            ))
        }
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|s| match s {
                Gen::A(k) => {
                    if *k == 1 {
                        "a".to_string()
                    } else {
                        format!("a^{k}")
                    }
                }
                Gen::B(n) => {
                    let coords: Vec<String> = n.entries().iter().map(|e| e.to_string()).collect();
                    format!("b[{}]", coords.join(","))
                }
                Gen::C(k) => {
                    if *k == 1 {
                        "c".to_string()
                    } else {
                        format!("c^{k}")
                    }
                }
                Gen::KappaA { level, exp } => {
                    if *exp == 1 {
                        format!("k{level}(a)")
                    } else {
                        format!("k{level}(a)^{exp}")
                    }
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Parses the CLI word syntax, e.g. `a^2 * b[1,0] * c^-1 * k3(a)`.
/// Whitespace is ignored; exponents are integers and reduced where the
/// generator has order p.
pub fn parse_word(input: &str, p: u64, r: usize) -> Result<Word> {
    let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() || cleaned == "1" {
        return Ok(Word::empty(p, r));
    }
    let mut syllables = Vec::new();
    for term in cleaned.split('*') {
        if term.is_empty() {
            return Err(Error::Parse("empty term".into()));
        }
        let (base, exp) = match term.rfind('^') {
            Some(i) => {
                let e: i64 = term[i + 1..]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{term}`")))?;
                (&term[..i], e)
            }
            None => (term, 1),
        };
        if base == "a" {
            syllables.push(Gen::A(exp.rem_euclid(p as i64) as u64));
        } else if base == "c" {
            syllables.push(Gen::C(exp));
        } else if let Some(rest) = base.strip_prefix("b[") {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unterminated vector in `{term}`")))?;
            let coords = inner
                .split(',')
                .map(|c| {
                    c.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad coordinate `{c}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != r {
                return Err(Error::Dimension {
                    expected: r,
                    got: coords.len(),
                });
            }
            let n = FpVec::new(p, coords);
            let scaled = n.scale(exp.rem_euclid(p as i64) as u64);
            syllables.push(Gen::B(scaled));
        } else if let Some(rest) = base.strip_prefix('k') {
            let level_str = rest
                .strip_suffix("(a)")
                .ok_or_else(|| Error::Parse(format!("expected `kM(a)` in `{term}`")))?;
            let level: usize = level_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad diagonal level `{level_str}`")))?;
            if level == 0 {
                return Err(Error::Parse("diagonal level must be >= 1".into()));
            }
            syllables.push(Gen::KappaA {
                level,
                exp: exp.rem_euclid(p as i64) as u64,
            });
        } else {
            return Err(Error::Parse(format!("unknown generator `{term}`")));
        }
    }
    Word::new(p, r, syllables)
}
