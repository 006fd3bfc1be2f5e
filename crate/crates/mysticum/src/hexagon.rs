//! Hexagons inscribed in a conic: Pascal lines, generalized Steiner-Kirkman
//! points, generalized Steiner lines, the Salmon-Cayley line, auxiliary
//! conics, and the full classical incidence census
//! (60 Pascal / 20 Steiner / 60 Kirkman / 15 Steiner-Plücker /
//! 20 Cayley-Salmon / 15 Salmon).
//!
//! Combinatorics: a Pascal line corresponds to an unordered pair of
//! edge-disjoint perfect matchings of the six labels (the two alternating
//! side-triples of a cyclic ordering; 60 pairs = 60 orderings). A triple of
//! pairwise disjoint matchings yields a point where its three Pascal lines
//! concur; the triple's 9 edges form either K₃,₃ (20 Steiner points) or a
//! non-bipartite graph (60 Kirkman points).

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::Zero;

use crate::decomposition::{in_pencil, pencil_of, residual_curve, ResidualCertificate};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::HomoPoly;
use crate::projective::{
    collinear, concurrent, conic_through, join, meet, on_cubic_rank, Conic, HLine, HPoint,
};
use crate::rat::ints_to_rats;
use crate::scene::{label, Lcg64, Scene};

/// A perfect matching of the 6 labels as sorted label pairs.
pub type Matching6 = [(usize, usize); 3];

/// All 15 perfect matchings, in a fixed deterministic order.
pub fn matchings6() -> Vec<Matching6> {
    fn rec(free: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Matching6>) {
        if free.is_empty() {
            let mut m = [(0, 0); 3];
            m.copy_from_slice(acc);
            m.sort();
            out.push(m);
            return;
        }
        let a = free[0];
        for i in 1..free.len() {
            let b = free[i];
            let rest: Vec<usize> = free[1..].iter().copied().filter(|&x| x != b).collect();
            acc.push((a, b));
            rec(&rest, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::with_capacity(15);
    rec(&[0, 1, 2, 3, 4, 5], &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn matchings_disjoint(a: &Matching6, b: &Matching6) -> bool {
    a.iter().all(|e| !b.contains(e))
}

/// Whether the 9 edges of three pairwise disjoint matchings form K₃,₃.
pub fn triple_is_bipartite(t: &[Matching6; 3]) -> bool {
    let edges: Vec<(usize, usize)> = t.iter().flatten().copied().collect();
    // try all 3+3 splits containing label 0
    for b in 1..6 {
        for c in b + 1..6 {
            let mut side = [false; 6];
            side[0] = true;
            side[b] = true;
            side[c] = true;
            if edges.iter().all(|&(x, y)| side[x] != side[y]) {
                return true;
            }
        }
    }
    false
}

/// Cyclic labeling of a hexagon modulo the dihedral group of order 12;
/// exactly 60 classes exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HexOrdering([u8; 6]);

impl HexOrdering {
    /// Canonical (lexicographically least among the 12 rotations and
    /// reflections) representative of the labeling.
    pub fn new(perm: [u8; 6]) -> Result<Self> {
        let mut seen = [false; 6];
        for &x in &perm {
            if x > 5 || seen[x as usize] {
                return Err(Error::Precondition("not a permutation of 6 labels".into()));
            }
            seen[x as usize] = true;
        }
        let mut best = perm;
        for s in 0..6 {
            let mut rot = [0u8; 6];
            let mut rev = [0u8; 6];
            for k in 0..6 {
                rot[k] = perm[(k + s) % 6];
                rev[k] = perm[(s + 6 - k) % 6];
            }
            if rot < best {
                best = rot;
            }
            if rev < best {
                best = rev;
            }
        }
        Ok(HexOrdering(best))
    }

    pub fn labels(&self) -> &[u8; 6] {
        &self.0
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bytes: Vec<u8> = s.bytes().map(|b| b.wrapping_sub(b'A')).collect();
        if bytes.len() != 6 {
            return Err(Error::Precondition("ordering needs 6 labels".into()));
        }
        let mut arr = [0u8; 6];
        arr.copy_from_slice(&bytes);
        HexOrdering::new(arr)
    }

    /// The two alternating side matchings of the ordering.
    pub fn side_matchings(&self) -> (Matching6, Matching6) {
        let edge = |k: usize| {
            let a = self.0[k] as usize;
            let b = self.0[(k + 1) % 6] as usize;
            (a.min(b), a.max(b))
        };
        let mut m1 = [edge(0), edge(2), edge(4)];
        let mut m2 = [edge(1), edge(3), edge(5)];
        m1.sort();
        m2.sort();
        (m1, m2)
    }

    /// All 60 canonical orderings.
    pub fn all() -> Vec<HexOrdering> {
        let mut set = BTreeSet::new();
        let mut perm = [0u8, 1, 2, 3, 4, 5];
        permute(&mut perm, 0, &mut set);
        set.into_iter().collect()
    }
}

impl std::fmt::Display for HexOrdering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", char::from(b'A' + b))?;
        }
        Ok(())
    }
}

fn permute(arr: &mut [u8; 6], k: usize, out: &mut BTreeSet<HexOrdering>) {
    if k == 6 {
        out.insert(HexOrdering::new(*arr).unwrap());
        return;
    }
    for i in k..6 {
        arr.swap(k, i);
        permute(arr, k + 1, out);
        arr.swap(k, i);
    }
}

/// A scene with exactly 6 labeled vertices A…F on the base conic.
#[derive(Debug, Clone)]
pub struct HexScene {
    pub scene: Scene,
    points: Vec<HPoint>,
}

impl HexScene {
    pub fn new(scene: Scene) -> Result<Self> {
        let mut points = Vec::with_capacity(6);
        for i in 0..6 {
            let p = scene.point(&label(i))?.clone();
            if !scene.conic.contains(&p) {
                return Err(Error::InvalidScene(format!("{} not on conic", label(i))));
            }
            if points.contains(&p) {
                return Err(Error::InvalidScene("duplicate vertices".into()));
            }
            points.push(p);
        }
        Ok(HexScene { scene, points })
    }

    pub fn generate(seed: u64) -> Self {
        HexScene::new(Scene::hexagon(seed)).expect("generated scenes are valid")
    }

    pub fn conic(&self) -> &Conic {
        &self.scene.conic
    }

    pub fn vertex(&self, i: usize) -> &HPoint {
        &self.points[i]
    }

    pub fn vertices(&self) -> &[HPoint] {
        &self.points
    }

    pub fn line(&self, i: usize, j: usize) -> HLine {
        join(&self.points[i], &self.points[j]).expect("vertices are distinct")
    }

    /// The decomposable cubic of a matching: product of its three chords.
    pub fn matching_cubic(&self, m: &Matching6) -> HomoPoly {
        let l0 = self.line(m[0].0, m[0].1).as_poly();
        let l1 = self.line(m[1].0, m[1].1).as_poly();
        let l2 = self.line(m[2].0, m[2].1).as_poly();
        l0.mul(&l1).mul(&l2)
    }

    fn cubic_through_all(&self, c: &HomoPoly) -> bool {
        c.degree() == 3 && self.points.iter().all(|p| c.eval_ints(p.coords()).is_zero())
    }

    /// Pascal line of a pair of edge-disjoint matchings, by the classical
    /// join-of-meets construction along the 6-cycle of their union.
    fn pair_pascal_line(&self, m1: &Matching6, m2: &Matching6) -> Result<HLine> {
        let cycle = union_cycle(m1, m2)?;
        let side = |k: usize| self.line(cycle[k], cycle[(k + 1) % 6]);
        let a = meet(&side(0), &side(3))?;
        let b = meet(&side(1), &side(4))?;
        let c = meet(&side(2), &side(5))?;
        if !collinear(&[a.clone(), b.clone(), c.clone()]) {
            return Err(Error::CollinearityFailure);
        }
        join(&a, &b)
    }

    /// Random cubic through all six vertices: a small-integer combination of
    /// the 4-dimensional solution space, rejecting anything in `avoid`.
    pub fn random_cubic(&self, rng: &mut Lcg64, avoid: &[HomoPoly]) -> HomoPoly {
        let rows: Vec<Vec<crate::rat::Rat>> = self
            .points
            .iter()
            .map(|p| ints_to_rats(&crate::projective::eval_row(3, p)))
            .collect();
        let basis = RatMatrix::from_rows(rows).nullspace();
        assert_eq!(basis.len(), 4, "six conic points give a 4-dimensional cubic system");
        loop {
            let cs: Vec<i64> = (0..4).map(|_| rng.small_coeff()).collect();
            if cs.iter().all(|&c| c == 0) {
                continue;
            }
            let mut v = vec![BigInt::zero(); 10];
            for (c, b) in cs.iter().zip(&basis) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += BigInt::from(*c) * bi;
                }
            }
            let Some(poly) = HomoPoly::from_ints(3, v) else { continue };
            if avoid.contains(&poly) {
                continue;
            }
            debug_assert!(self.cubic_through_all(&poly));
            return poly;
        }
    }

    /// Three random cubics through the six vertices with independent
    /// coefficient vectors (a dependent triple collapses the three pairwise
    /// Pascal lines into one).
    pub fn random_cubic_triple(&self, rng: &mut Lcg64) -> [HomoPoly; 3] {
        loop {
            let d1 = self.random_cubic(rng, &[]);
            let d2 = self.random_cubic(rng, &[d1.clone()]);
            let d3 = self.random_cubic(rng, &[d1.clone(), d2.clone()]);
            let rows = vec![
                d1.coeffs().to_vec(),
                d2.coeffs().to_vec(),
                d3.coeffs().to_vec(),
            ];
            if crate::linalg::int_rank(rows, 10) == 3 {
                return [d1, d2, d3];
            }
        }
    }

    /// A conic through four labeled vertices and a seeded free point off the
    /// base conic, rejected until nondegenerate.
    pub fn conic_through_four(&self, labels4: [usize; 4], rng: &mut Lcg64) -> Conic {
        loop {
            let p = HPoint::from_i64(rng.int_in(-40, 40), rng.int_in(-40, 40), rng.int_in(1, 25));
            let Some(p) = p else { continue };
            if self.conic().contains(&p) {
                continue;
            }
            let pts = [
                self.points[labels4[0]].clone(),
                self.points[labels4[1]].clone(),
                self.points[labels4[2]].clone(),
                self.points[labels4[3]].clone(),
                p,
            ];
            match conic_through(&pts) {
                Ok(c) if !c.is_degenerate() => return c,
                _ => continue,
            }
        }
    }
}

/// Reads off the 6-cycle of the union of two edge-disjoint matchings.
fn union_cycle(m1: &Matching6, m2: &Matching6) -> Result<[usize; 6]> {
    if !matchings_disjoint(m1, m2) {
        return Err(Error::SharedComponent);
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 6];
    for &(a, b) in m1.iter().chain(m2.iter()) {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut cycle = [0usize; 6];
    let mut prev = usize::MAX;
    let mut cur = 0usize;
    for slot in cycle.iter_mut() {
        *slot = cur;
        let next = *adj[cur].iter().find(|&&x| x != prev).unwrap();
        prev = cur;
        cur = next;
    }
    if cur != 0 {
        return Err(Error::Precondition("matchings do not union to a 6-cycle".into()));
    }
    Ok(cycle)
}

/// Pascal line of a labeled hexagon by the classical construction: the
/// meets of the three opposite-side pairs are collinear on it.
pub fn classical_pascal_line(s: &HexScene, o: &HexOrdering) -> Result<HLine> {
    let v = o.labels();
    let side = |k: usize| s.line(v[k] as usize, v[(k + 1) % 6] as usize);
    let a = meet(&side(0), &side(3))?;
    let b = meet(&side(1), &side(4))?;
    let c = meet(&side(2), &side(5))?;
    if !collinear(&[a.clone(), b.clone(), c.clone()]) {
        return Err(Error::CollinearityFailure);
    }
    join(&a, &b)
}

/// Generalized Pascal line: the residual line of two distinct cubics
/// through all six vertices.
pub fn generalized_pascal_line(s: &HexScene, d1: &HomoPoly, d2: &HomoPoly) -> Result<HLine> {
    Ok(generalized_pascal_certificate(s, d1, d2)?.0)
}

fn residual_line(cert: &ResidualCertificate) -> Result<HLine> {
    let c = cert.residual.coeffs();
    HLine::new([c[0].clone(), c[1].clone(), c[2].clone()])
        .ok_or(Error::Precondition("zero residual".into()))
}

/// Generalized Pascal line with its certificate, for callers that re-verify.
pub fn generalized_pascal_certificate(
    s: &HexScene,
    d1: &HomoPoly,
    d2: &HomoPoly,
) -> Result<(HLine, ResidualCertificate)> {
    for d in [d1, d2] {
        if !s.cubic_through_all(d) {
            return Err(Error::Precondition("cubic does not pass through all vertices".into()));
        }
    }
    let cert = residual_curve(d1, d2, s.conic(), s.vertices())?;
    let line = residual_line(&cert)?;
    Ok((line, cert))
}

/// Conics through A,B,C,D and A,B,E,F meet again in two points collinear
/// with CD ∩ EF; certified by the residual line of 𝒞₁·l(EF) and 𝒞₂·l(CD).
pub fn prop_3_2_verify(s: &HexScene) -> Result<bool> {
    let mut rng = s.scene.rng(32);
    let c1 = s.conic_through_four([0, 1, 2, 3], &mut rng);
    let c2 = s.conic_through_four([0, 1, 4, 5], &mut rng);
    let l_cd = s.line(2, 3);
    let l_ef = s.line(4, 5);
    let d1 = c1.form().mul(&l_ef.as_poly());
    let d2 = c2.form().mul(&l_cd.as_poly());
    let (line, cert) = generalized_pascal_certificate(s, &d1, &d2)?;
    if !cert.verify() {
        return Err(Error::PencilViolation);
    }
    let cross = meet(&l_cd, &l_ef)?;
    Ok(cross.on_line(&line))
}

/// Three conics pairwise sharing two vertices produce three residual lines
/// in one pencil (via the generalized Steiner-Kirkman point of the three
/// composite cubics 𝒞₁·l(EF), 𝒞₂·l(CD), 𝒞₃·l(AB)).
pub fn prop_3_5_verify(s: &HexScene) -> Result<bool> {
    let mut rng = s.scene.rng(35);
    let c1 = s.conic_through_four([0, 1, 2, 3], &mut rng);
    let c2 = s.conic_through_four([0, 1, 4, 5], &mut rng);
    let c3 = s.conic_through_four([2, 3, 4, 5], &mut rng);
    let e1 = c1.form().mul(&s.line(4, 5).as_poly());
    let e2 = c2.form().mul(&s.line(2, 3).as_poly());
    let e3 = c3.form().mul(&s.line(0, 1).as_poly());
    let p3 = generalized_pascal_line(s, &e1, &e2)?;
    let p2 = generalized_pascal_line(s, &e1, &e3)?;
    let p1 = generalized_pascal_line(s, &e2, &e3)?;
    Ok(concurrent(&[p1, p2, p3]))
}

/// Generalized Steiner-Kirkman point: the common point of the three
/// pairwise generalized Pascal lines of three distinct cubics through the
/// six vertices.
pub fn gsk_point(s: &HexScene, d1: &HomoPoly, d2: &HomoPoly, d3: &HomoPoly) -> Result<HPoint> {
    let p1 = generalized_pascal_line(s, d2, d3)?;
    let p2 = generalized_pascal_line(s, d1, d3)?;
    let p3 = generalized_pascal_line(s, d1, d2)?;
    let x = meet(&p1, &p2)?;
    if !x.on_line(&p3) {
        return Err(Error::ConcurrencyFailure);
    }
    Ok(x)
}

type MatchingTriple = [(usize, usize); 3];

/// Companion matchings paired with the free cubic D: meet(pᵢ, qᵢ) are the
/// four generalized Steiner points of the construction.
const GSL_P: [MatchingTriple; 4] = [
    [(0, 1), (3, 5), (2, 4)],
    [(0, 3), (1, 2), (4, 5)],
    [(0, 4), (1, 3), (2, 5)],
    [(0, 2), (1, 5), (3, 4)],
];
const GSL_Q: [MatchingTriple; 4] = [
    [(0, 2), (4, 5), (1, 3)],
    [(0, 1), (2, 5), (3, 4)],
    [(0, 3), (1, 5), (2, 4)],
    [(0, 4), (1, 2), (3, 5)],
];

fn to_matching(t: &MatchingTriple) -> Matching6 {
    let mut m = *t;
    for e in m.iter_mut() {
        *e = (e.0.min(e.1), e.0.max(e.1));
    }
    m.sort();
    m
}

/// The full data of the generalized-Steiner-line construction: the four
/// p-lines and q-lines paired with the free cubic, the four generalized
/// Steiner points meet(pᵢ, qᵢ), and the line they lie on.
#[derive(Debug, Clone)]
pub struct SteinerLineData {
    pub p_lines: [HLine; 4],
    pub q_lines: [HLine; 4],
    pub points: [HPoint; 4],
    pub line: HLine,
    /// The three matchings of the free cubic when it is decomposable (the
    /// third line-net class), in construction order.
    pub companion_lines: Option<[HLine; 3]>,
}

pub fn steiner_line_construction(s: &HexScene, d: &HomoPoly) -> Result<SteinerLineData> {
    if !s.cubic_through_all(d) {
        return Err(Error::Precondition("cubic does not pass through all vertices".into()));
    }
    for t in GSL_P.iter().chain(GSL_Q.iter()) {
        if *d == s.matching_cubic(&to_matching(t)) {
            return Err(Error::Precondition(
                "cubic coincides with one of the construction's decomposable cubics".into(),
            ));
        }
    }
    let mut p_lines = Vec::with_capacity(4);
    let mut q_lines = Vec::with_capacity(4);
    let mut pts = Vec::with_capacity(4);
    for i in 0..4 {
        let p = generalized_pascal_line(s, d, &s.matching_cubic(&to_matching(&GSL_P[i])))?;
        let q = generalized_pascal_line(s, d, &s.matching_cubic(&to_matching(&GSL_Q[i])))?;
        pts.push(meet(&p, &q)?);
        p_lines.push(p);
        q_lines.push(q);
    }
    let line = join(&pts[0], &pts[1])?;
    if !pts[2..].iter().all(|p| p.on_line(&line)) {
        return Err(Error::CollinearityFailure);
    }
    // when D factors into three chords of the scene, expose them
    let companion_lines = decompose_matching_cubic(s, d)
        .map(|m| [s.line(m[0].0, m[0].1), s.line(m[1].0, m[1].1), s.line(m[2].0, m[2].1)]);
    Ok(SteinerLineData {
        p_lines: [p_lines[0].clone(), p_lines[1].clone(), p_lines[2].clone(), p_lines[3].clone()],
        q_lines: [q_lines[0].clone(), q_lines[1].clone(), q_lines[2].clone(), q_lines[3].clone()],
        points: [pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone()],
        line,
        companion_lines,
    })
}

fn decompose_matching_cubic(s: &HexScene, d: &HomoPoly) -> Option<Matching6> {
    matchings6().into_iter().find(|m| s.matching_cubic(m) == *d)
}

/// The four generalized 𝒟 Steiner points lie on one line.
pub fn generalized_steiner_line(s: &HexScene, d: &HomoPoly) -> Result<HLine> {
    Ok(steiner_line_construction(s, d)?.line)
}

/// Cubic pairs for the four p-lines and q-lines of the Salmon-Cayley
/// construction. The source's q₃ entry duplicates p₃ verbatim; the pair
/// used here is the unique completion for which the collinearity and every
/// companion conic identity hold exactly.
const SC_P: [(MatchingTriple, MatchingTriple); 4] = [
    ([(0, 1), (3, 5), (2, 4)], [(0, 2), (4, 5), (1, 3)]),
    ([(0, 2), (1, 5), (3, 4)], [(0, 4), (1, 2), (3, 5)]),
    ([(0, 2), (1, 4), (3, 5)], [(0, 4), (1, 3), (2, 5)]),
    ([(0, 1), (3, 4), (2, 5)], [(0, 5), (1, 4), (2, 3)]),
];
const SC_Q: [(MatchingTriple, MatchingTriple); 4] = [
    ([(0, 1), (3, 5), (2, 4)], [(0, 4), (1, 5), (2, 3)]),
    ([(0, 2), (1, 5), (3, 4)], [(0, 5), (1, 3), (2, 4)]),
    ([(0, 4), (1, 3), (2, 5)], [(0, 3), (1, 5), (2, 4)]),
    ([(0, 1), (3, 4), (2, 5)], [(0, 3), (1, 2), (4, 5)]),
];

fn apply_sigma(t: &Matching6, sigma: &[usize; 6]) -> Matching6 {
    let mut m = [(0usize, 0usize); 3];
    for (k, &(a, b)) in t.iter().enumerate() {
        let (x, y) = (sigma[a], sigma[b]);
        m[k] = (x.min(y), x.max(y));
    }
    m.sort();
    m
}

fn sc_lines_under(s: &HexScene, sigma: &[usize; 6]) -> Result<([HLine; 4], [HLine; 4])> {
    let line_of = |pair: &(MatchingTriple, MatchingTriple)| -> Result<HLine> {
        s.pair_pascal_line(
            &apply_sigma(&to_matching(&pair.0), sigma),
            &apply_sigma(&to_matching(&pair.1), sigma),
        )
    };
    Ok((
        [line_of(&SC_P[0])?, line_of(&SC_P[1])?, line_of(&SC_P[2])?, line_of(&SC_P[3])?],
        [line_of(&SC_Q[0])?, line_of(&SC_Q[1])?, line_of(&SC_Q[2])?, line_of(&SC_Q[3])?],
    ))
}

const IDENTITY_SIGMA: [usize; 6] = [0, 1, 2, 3, 4, 5];

/// The Salmon-Cayley line: three Kirkman points and one Steiner point
/// (returned last) on one line.
pub fn salmon_cayley_line(s: &HexScene) -> Result<(HLine, [HPoint; 4])> {
    salmon_cayley_line_under(s, &IDENTITY_SIGMA)
}

fn salmon_cayley_line_under(s: &HexScene, sigma: &[usize; 6]) -> Result<(HLine, [HPoint; 4])> {
    let (p, q) = sc_lines_under(s, sigma)?;
    let pts = [
        meet(&p[0], &q[0])?,
        meet(&p[1], &q[1])?,
        meet(&p[2], &q[2])?,
        meet(&p[3], &q[3])?,
    ];
    let line = join(&pts[0], &pts[1])?;
    if !pts[2].on_line(&line) || !pts[3].on_line(&line) {
        return Err(Error::CollinearityFailure);
    }
    Ok((line, pts))
}

/// Companion conics and loci of the Salmon-Cayley construction.
#[derive(Debug, Clone)]
pub struct AuxiliaryConics {
    /// Through p₁q₂, p₁q₄, p₂q₁, p₂q₄, p₄q₁, p₄q₂.
    pub steiner_conic: Conic,
    /// Through p₃q₁, p₁q₃, p₂q₃, p₃q₂, p₁q₂, p₂q₁.
    pub kirkman_conic: Conic,
    /// Through p₃q₁, p₁q₃, p₂q₃, p₃q₂ and the vertices C, F.
    pub lemma45_conic: Conic,
    /// Rank of the 12×10 cubic evaluation matrix of the off-diagonal meets.
    pub sc_cubic_rank: usize,
    /// Whether pencil(steiner, kirkman) contains join(p₁q₂,p₂q₁)·l(C,F).
    pub residual_online_cf: bool,
}

pub fn auxiliary_conics(s: &HexScene) -> Result<AuxiliaryConics> {
    let (p, q) = sc_lines_under(s, &IDENTITY_SIGMA)?;
    let pq = |i: usize, j: usize| meet(&p[i], &q[j]);
    let fit = |pts: [HPoint; 6], what: &str| -> Result<Conic> {
        let five = [pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone(), pts[4].clone()];
        let c = conic_through(&five)?;
        if !c.contains(&pts[5]) {
            return Err(Error::CensusMismatch(format!("{what} conic misses its sixth point")));
        }
        Ok(c)
    };
    let steiner_conic = fit(
        [pq(0, 1)?, pq(0, 3)?, pq(1, 0)?, pq(1, 3)?, pq(3, 0)?, pq(3, 1)?],
        "steiner",
    )?;
    let kirkman_conic = fit(
        [pq(2, 0)?, pq(0, 2)?, pq(1, 2)?, pq(2, 1)?, pq(0, 1)?, pq(1, 0)?],
        "kirkman",
    )?;
    let lemma45_conic = fit(
        [pq(2, 0)?, pq(0, 2)?, pq(1, 2)?, pq(2, 1)?, s.vertex(2).clone(), s.vertex(5).clone()],
        "vertex-pair",
    )?;
    let mut offdiag = Vec::with_capacity(12);
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                offdiag.push(pq(i, j)?);
            }
        }
    }
    let sc_cubic_rank = on_cubic_rank(&offdiag);
    let pencil = pencil_of(steiner_conic.form(), kirkman_conic.form())?;
    let cross_line = join(&pq(0, 1)?, &pq(1, 0)?)?;
    let pair_form = cross_line.as_poly().mul(&s.line(2, 5).as_poly());
    let residual_online_cf = in_pencil(&pair_form, &pencil);
    Ok(AuxiliaryConics {
        steiner_conic,
        kirkman_conic,
        lemma45_conic,
        sc_cubic_rank,
        residual_online_cf,
    })
}

/// Exact incidence census of a hexagon scene.
#[derive(Debug, Clone)]
pub struct HexCensus {
    pub pascal_lines: Vec<HLine>,
    pub steiner_points: Vec<HPoint>,
    pub kirkman_points: Vec<HPoint>,
    pub steiner_plucker_lines: Vec<HLine>,
    pub cayley_salmon_lines: Vec<HLine>,
    pub salmon_points: Vec<HPoint>,
    /// Exactly-three-fold concurrency points among the 60 Pascal lines.
    pub pascal_triple_points: usize,
    /// Four-fold concurrency points (disjoint chord cross-points).
    pub pascal_quadruple_points: usize,
    /// Cayley-Salmon lines through each Salmon point.
    pub cs_lines_per_salmon_point: usize,
    /// Salmon points on each Cayley-Salmon line.
    pub salmon_points_per_cs_line: usize,
}

impl HexCensus {
    pub fn counts(&self) -> (usize, usize, usize, usize, usize, usize) {
        (
            self.pascal_lines.len(),
            self.steiner_points.len(),
            self.kirkman_points.len(),
            self.steiner_plucker_lines.len(),
            self.cayley_salmon_lines.len(),
            self.salmon_points.len(),
        )
    }

    pub fn to_json(&self, scene: &Scene) -> serde_json::Value {
        let lines = |v: &Vec<HLine>| -> Vec<Vec<String>> {
            v.iter().map(|l| l.coeffs().iter().map(|c| c.to_string()).collect()).collect()
        };
        let points = |v: &Vec<HPoint>| -> Vec<Vec<String>> {
            v.iter().map(|p| p.coords().iter().map(|c| c.to_string()).collect()).collect()
        };
        serde_json::json!({
            "scene_hash": scene.hash(),
            "tool_version": env!("CARGO_PKG_VERSION"),
            "counts": {
                "pascal_lines": self.pascal_lines.len(),
                "steiner_points": self.steiner_points.len(),
                "kirkman_points": self.kirkman_points.len(),
                "steiner_plucker_lines": self.steiner_plucker_lines.len(),
                "cayley_salmon_lines": self.cayley_salmon_lines.len(),
                "salmon_points": self.salmon_points.len(),
                "pascal_triple_points": self.pascal_triple_points,
                "pascal_quadruple_points": self.pascal_quadruple_points,
                "cs_lines_per_salmon_point": self.cs_lines_per_salmon_point,
                "salmon_points_per_cs_line": self.salmon_points_per_cs_line,
            },
            "pascal_lines": lines(&self.pascal_lines),
            "steiner_points": points(&self.steiner_points),
            "kirkman_points": points(&self.kirkman_points),
            "steiner_plucker_lines": lines(&self.steiner_plucker_lines),
            "cayley_salmon_lines": lines(&self.cayley_salmon_lines),
            "salmon_points": points(&self.salmon_points),
        })
    }
}

fn mismatch<T>(what: &str, expected: usize, got: usize) -> Result<T> {
    Err(Error::CensusMismatch(format!("{what}: expected {expected}, got {got}")))
}

/// Builds and cross-checks the full classical census. Every incidence count
/// is verified exactly; any deviation (a degenerate scene with accidental
/// incidences) reports CensusMismatch.
pub fn census(s: &HexScene) -> Result<HexCensus> {
    let ms = matchings6();

    // 60 Pascal lines, one per edge-disjoint matching pair.
    let mut pair_line: BTreeMap<(usize, usize), HLine> = BTreeMap::new();
    for i in 0..15 {
        for j in i + 1..15 {
            if matchings_disjoint(&ms[i], &ms[j]) {
                pair_line.insert((i, j), s.pair_pascal_line(&ms[i], &ms[j])?);
            }
        }
    }
    if pair_line.len() != 60 {
        return mismatch("edge-disjoint matching pairs", 60, pair_line.len());
    }
    let distinct: BTreeSet<&HLine> = pair_line.values().collect();
    if distinct.len() != 60 {
        return mismatch("distinct Pascal lines", 60, distinct.len());
    }

    // 80 pairwise-disjoint triples and their concurrency points.
    let mut steiner: BTreeMap<[usize; 3], HPoint> = BTreeMap::new();
    let mut kirkman: BTreeMap<[usize; 3], HPoint> = BTreeMap::new();
    for i in 0..15 {
        for j in i + 1..15 {
            if !matchings_disjoint(&ms[i], &ms[j]) {
                continue;
            }
            for k in j + 1..15 {
                if !matchings_disjoint(&ms[i], &ms[k]) || !matchings_disjoint(&ms[j], &ms[k]) {
                    continue;
                }
                let l1 = &pair_line[&(i, j)];
                let l2 = &pair_line[&(i, k)];
                let l3 = &pair_line[&(j, k)];
                let x = meet(l1, l2)?;
                if !x.on_line(l3) {
                    return Err(Error::CensusMismatch(format!(
                        "Pascal lines of triple ({i},{j},{k}) are not concurrent"
                    )));
                }
                if triple_is_bipartite(&[ms[i], ms[j], ms[k]]) {
                    steiner.insert([i, j, k], x);
                } else {
                    kirkman.insert([i, j, k], x);
                }
            }
        }
    }
    if steiner.len() != 20 {
        return mismatch("Steiner triples", 20, steiner.len());
    }
    if kirkman.len() != 60 {
        return mismatch("Kirkman triples", 60, kirkman.len());
    }
    let steiner_set: BTreeSet<HPoint> = steiner.values().cloned().collect();
    let kirkman_set: BTreeSet<HPoint> = kirkman.values().cloned().collect();
    if steiner_set.len() != 20 || kirkman_set.len() != 60 {
        return mismatch("distinct triple points", 80, steiner_set.len() + kirkman_set.len());
    }
    if steiner_set.intersection(&kirkman_set).next().is_some() {
        return Err(Error::CensusMismatch("Steiner and Kirkman points overlap".into()));
    }

    // Exactly 3 Pascal lines per point; per line 1 Steiner + 3 Kirkman.
    for (lbl, pts) in [("Steiner", &steiner_set), ("Kirkman", &kirkman_set)] {
        for p in pts.iter() {
            let n = pair_line.values().filter(|l| p.on_line(l)).count();
            if n != 3 {
                return Err(Error::CensusMismatch(format!(
                    "{lbl} point lies on {n} Pascal lines, expected 3"
                )));
            }
        }
    }
    for l in pair_line.values() {
        let ns = steiner_set.iter().filter(|p| p.on_line(l)).count();
        let nk = kirkman_set.iter().filter(|p| p.on_line(l)).count();
        if (ns, nk) != (1, 3) {
            return Err(Error::CensusMismatch(format!(
                "Pascal line carries {ns} Steiner + {nk} Kirkman points, expected 1 + 3"
            )));
        }
    }

    // Clustering cross-check over all pairwise meets. Exactly-three-fold
    // concurrences are the 80 Steiner/Kirkman points; the meets of the 45
    // disjoint chord pairs each carry exactly 4 Pascal lines (every Pascal
    // line holds 3 of them: its opposite-side meets).
    let lines: Vec<&HLine> = pair_line.values().collect();
    let mut meet_lines: BTreeMap<HPoint, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let x = meet(lines[i], lines[j])?;
            let e = meet_lines.entry(x).or_default();
            e.insert(i);
            e.insert(j);
        }
    }
    let mut triple_pts = Vec::new();
    let mut quad_pts = Vec::new();
    for (p, ls) in &meet_lines {
        match ls.len() {
            0..=2 => {}
            3 => triple_pts.push(p),
            4 => quad_pts.push(p),
            n => {
                return Err(Error::CensusMismatch(format!(
                    "a Pascal meet carries {n} lines, expected at most 4"
                )))
            }
        }
    }
    if triple_pts.len() != 80 {
        return mismatch("triple points among Pascal meets", 80, triple_pts.len());
    }
    for p in &triple_pts {
        if !steiner_set.contains(p) && !kirkman_set.contains(p) {
            return Err(Error::CensusMismatch("clustered triple point is not classified".into()));
        }
    }
    if quad_pts.len() != 45 {
        return mismatch("four-fold chord-cross points among Pascal meets", 45, quad_pts.len());
    }
    let mut chord_meets = BTreeSet::new();
    for a in 0..6 {
        for b in a + 1..6 {
            for c in 0..6 {
                for d in c + 1..6 {
                    if (a, b) < (c, d) && a != c && a != d && b != c && b != d {
                        chord_meets.insert(meet(&s.line(a, b), &s.line(c, d))?);
                    }
                }
            }
        }
    }
    for p in &quad_pts {
        if !chord_meets.contains(p) {
            return Err(Error::CensusMismatch(
                "four-fold Pascal concurrence is not a chord cross-point".into(),
            ));
        }
    }

    // 15 Steiner-Plücker lines: one per matching, through its 4 Steiner points.
    let mut sp_lines = Vec::with_capacity(15);
    for d in 0..15 {
        let pts: Vec<&HPoint> =
            steiner.iter().filter(|(t, _)| t.contains(&d)).map(|(_, p)| p).collect();
        if pts.len() != 4 {
            return mismatch("Steiner triples through a matching", 4, pts.len());
        }
        let l = join(pts[0], pts[1])?;
        if !pts[2..].iter().all(|p| p.on_line(&l)) {
            return Err(Error::CensusMismatch("Steiner points of a matching not collinear".into()));
        }
        sp_lines.push(l);
    }
    let sp_set: BTreeSet<&HLine> = sp_lines.iter().collect();
    if sp_set.len() != 15 {
        return mismatch("distinct Steiner-Plücker lines", 15, sp_set.len());
    }
    for p in &steiner_set {
        let n = sp_lines.iter().filter(|l| p.on_line(l)).count();
        if n != 3 {
            return Err(Error::CensusMismatch(format!(
                "Steiner point on {n} Steiner-Plücker lines, expected 3"
            )));
        }
    }

    // 20 Cayley-Salmon lines: relabel the construction onto each Steiner triple.
    let base_triple: BTreeSet<Matching6> = classical_steiner_triple().into_iter().collect();
    let mut cs_lines = Vec::with_capacity(20);
    for (t, steiner_pt) in &steiner {
        let target: BTreeSet<Matching6> = t.iter().map(|&i| ms[i]).collect();
        let sigma = find_relabeling(&base_triple, &target)
            .ok_or_else(|| Error::CensusMismatch("no relabeling onto a Steiner triple".into()))?;
        let (line, pts) = salmon_cayley_line_under(s, &sigma)?;
        if &pts[3] != steiner_pt {
            return Err(Error::CensusMismatch(
                "Salmon-Cayley construction misses its Steiner point".into(),
            ));
        }
        for kp in &pts[..3] {
            if !kirkman_set.contains(kp) {
                return Err(Error::CensusMismatch(
                    "Salmon-Cayley point is not a census Kirkman point".into(),
                ));
            }
        }
        cs_lines.push(line);
    }
    let cs_set: BTreeSet<&HLine> = cs_lines.iter().collect();
    if cs_set.len() != 20 {
        return mismatch("distinct Cayley-Salmon lines", 20, cs_set.len());
    }
    for l in &cs_lines {
        let nk = kirkman_set.iter().filter(|p| p.on_line(l)).count();
        let ns = steiner_set.iter().filter(|p| p.on_line(l)).count();
        if (nk, ns) != (3, 1) {
            return Err(Error::CensusMismatch(format!(
                "Cayley-Salmon line carries {nk} Kirkman + {ns} Steiner, expected 3 + 1"
            )));
        }
    }
    for p in &kirkman_set {
        let n = cs_lines.iter().filter(|l| p.on_line(l)).count();
        if n != 1 {
            return Err(Error::CensusMismatch(format!(
                "Kirkman point on {n} Cayley-Salmon lines, expected 1"
            )));
        }
    }

    // 15 Salmon points: concurrency points of the Cayley-Salmon lines.
    let mut salmon_map: BTreeMap<HPoint, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..cs_lines.len() {
        for j in i + 1..cs_lines.len() {
            let x = meet(&cs_lines[i], &cs_lines[j])?;
            let e = salmon_map.entry(x).or_default();
            e.insert(i);
            e.insert(j);
        }
    }
    let salmon: Vec<(HPoint, usize)> = salmon_map
        .into_iter()
        .filter(|(_, ls)| ls.len() >= 3)
        .map(|(p, ls)| (p, ls.len()))
        .collect();
    if salmon.len() != 15 {
        return mismatch("Salmon points", 15, salmon.len());
    }
    let per_point = salmon[0].1;
    if salmon.iter().any(|&(_, n)| n != per_point) {
        return Err(Error::CensusMismatch("uneven Salmon point degrees".into()));
    }
    let salmon_points: Vec<HPoint> = salmon.into_iter().map(|(p, _)| p).collect();
    let per_line: BTreeSet<usize> = cs_lines
        .iter()
        .map(|l| salmon_points.iter().filter(|p| p.on_line(l)).count())
        .collect();
    if per_line.len() != 1 {
        return Err(Error::CensusMismatch("uneven Salmon points per line".into()));
    }
    let salmon_per_line = *per_line.iter().next().unwrap();

    Ok(HexCensus {
        pascal_lines: pair_line.into_values().collect(),
        steiner_points: steiner_set.into_iter().collect(),
        kirkman_points: kirkman_set.into_iter().collect(),
        steiner_plucker_lines: sp_lines,
        cayley_salmon_lines: cs_lines,
        salmon_points,
        pascal_triple_points: 80,
        pascal_quadruple_points: 45,
        cs_lines_per_salmon_point: per_point,
        salmon_points_per_cs_line: salmon_per_line,
    })
}

/// A label permutation mapping one matching triple onto another, if any.
fn find_relabeling(from: &BTreeSet<Matching6>, to: &BTreeSet<Matching6>) -> Option<[usize; 6]> {
    fn rec(
        sigma: &mut [usize; 6],
        k: usize,
        from: &BTreeSet<Matching6>,
        to: &BTreeSet<Matching6>,
    ) -> bool {
        if k == 6 {
            let image: BTreeSet<Matching6> = from.iter().map(|m| apply_sigma(m, sigma)).collect();
            return &image == to;
        }
        for i in k..6 {
            sigma.swap(k, i);
            if rec(sigma, k + 1, from, to) {
                return true;
            }
            sigma.swap(k, i);
        }
        false
    }
    let mut sigma = [0usize, 1, 2, 3, 4, 5];
    if rec(&mut sigma, 0, from, to) {
        Some(sigma)
    } else {
        None
    }
}

/// The classical Steiner triple of the base labeling.
pub fn classical_steiner_triple() -> [Matching6; 3] {
    [
        to_matching(&[(0, 1), (3, 4), (2, 5)]),
        to_matching(&[(1, 4), (2, 3), (0, 5)]),
        to_matching(&[(0, 3), (1, 2), (4, 5)]),
    ]
}

/// The classical Kirkman triple of the base labeling.
pub fn classical_kirkman_triple() -> [Matching6; 3] {
    [
        to_matching(&[(0, 1), (3, 5), (2, 4)]),
        to_matching(&[(0, 4), (1, 5), (2, 3)]),
        to_matching(&[(0, 2), (1, 3), (4, 5)]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_matchings_sixty_orderings() {
        let ms = matchings6();
        assert_eq!(ms.len(), 15);
        let orderings = HexOrdering::all();
        assert_eq!(orderings.len(), 60);
        let mut pairs = BTreeSet::new();
        for o in &orderings {
            let (m1, m2) = o.side_matchings();
            assert!(matchings_disjoint(&m1, &m2));
            let mut key = [m1, m2];
            key.sort();
            pairs.insert(key);
        }
        assert_eq!(pairs.len(), 60);
    }

    #[test]
    fn dihedral_invariance_of_orderings() {
        let a = HexOrdering::parse("ABCDEF").unwrap();
        let b = HexOrdering::parse("BCDEFA").unwrap();
        let c = HexOrdering::parse("FEDCBA").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_ne!(a, HexOrdering::parse("ABCDFE").unwrap());
    }

    #[test]
    fn classical_line_equals_certificate_line() {
        let s = HexScene::generate(2);
        for name in ["ABCDEF", "ABEDCF", "ACEBDF"] {
            let o = HexOrdering::parse(name).unwrap();
            let classical = classical_pascal_line(&s, &o).unwrap();
            let (m1, m2) = o.side_matchings();
            let d1 = s.matching_cubic(&m1);
            let d2 = s.matching_cubic(&m2);
            let general = generalized_pascal_line(&s, &d1, &d2).unwrap();
            assert_eq!(classical, general);
        }
    }

    #[test]
    fn pascal_line_rejects_dependent_cubics() {
        let s = HexScene::generate(3);
        let o = HexOrdering::parse("ABCDEF").unwrap();
        let (m1, _) = o.side_matchings();
        let d = s.matching_cubic(&m1);
        assert_eq!(generalized_pascal_line(&s, &d, &d), Err(Error::DependentCurves));
    }

    #[test]
    fn generalized_pascal_with_conic_times_line() {
        let s = HexScene::generate(4);
        let d1 = s.matching_cubic(&to_matching(&[(0, 1), (2, 3), (4, 5)]));
        let free_line = HLine::from_i64(17, -5, 3).unwrap();
        assert!(s.vertices().iter().all(|p| !p.on_line(&free_line)));
        let d2 = s.conic().form().mul(&free_line.as_poly());
        let (line, cert) = generalized_pascal_certificate(&s, &d1, &d2).unwrap();
        assert!(cert.verify());
        // the residual of (D1, C·L) is L itself
        assert_eq!(line, free_line);
    }

    #[test]
    fn prop_3_2_and_3_5_hold() {
        for seed in [1, 9, 23] {
            let s = HexScene::generate(seed);
            assert_eq!(prop_3_2_verify(&s), Ok(true));
            assert_eq!(prop_3_5_verify(&s), Ok(true));
        }
    }

    #[test]
    fn classical_steiner_and_kirkman_points() {
        let s = HexScene::generate(12);
        let st = classical_steiner_triple();
        let sp = gsk_point(
            &s,
            &s.matching_cubic(&st[0]),
            &s.matching_cubic(&st[1]),
            &s.matching_cubic(&st[2]),
        )
        .unwrap();
        let kt = classical_kirkman_triple();
        let kp = gsk_point(
            &s,
            &s.matching_cubic(&kt[0]),
            &s.matching_cubic(&kt[1]),
            &s.matching_cubic(&kt[2]),
        )
        .unwrap();
        assert_ne!(sp, kp);
        let c = census(&s).unwrap();
        assert!(c.steiner_points.contains(&sp));
        assert!(c.kirkman_points.contains(&kp));
    }

    #[test]
    fn gsk_point_with_random_cubic() {
        let s = HexScene::generate(15);
        let mut rng = s.scene.rng(77);
        let d1 = s.matching_cubic(&to_matching(&[(0, 1), (3, 5), (2, 4)]));
        let d2 = s.matching_cubic(&to_matching(&[(0, 3), (1, 2), (4, 5)]));
        let d3 = s.random_cubic(&mut rng, &[d1.clone(), d2.clone()]);
        gsk_point(&s, &d1, &d2, &d3).unwrap();
    }

    #[test]
    fn generalized_steiner_line_matches_census_plucker_line() {
        let s = HexScene::generate(6);
        // D = l(AF)·l(BE)·l(CD)
        let d = s.matching_cubic(&to_matching(&[(0, 5), (1, 4), (2, 3)]));
        let line = generalized_steiner_line(&s, &d).unwrap();
        let c = census(&s).unwrap();
        assert!(c.steiner_plucker_lines.contains(&line));
        // random cubic variant
        let mut rng = s.scene.rng(41);
        let avoid: Vec<HomoPoly> = GSL_P
            .iter()
            .chain(GSL_Q.iter())
            .map(|t| s.matching_cubic(&to_matching(t)))
            .collect();
        let d2 = s.random_cubic(&mut rng, &avoid);
        generalized_steiner_line(&s, &d2).unwrap();
        // a construction cubic is rejected
        let bad = s.matching_cubic(&to_matching(&GSL_P[0]));
        assert!(matches!(generalized_steiner_line(&s, &bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn salmon_cayley_line_and_auxiliaries() {
        let s = HexScene::generate(10);
        let (line, pts) = salmon_cayley_line(&s).unwrap();
        for p in &pts {
            assert!(p.on_line(&line));
        }
        let c = census(&s).unwrap();
        assert!(c.kirkman_points.contains(&pts[0]));
        assert!(c.kirkman_points.contains(&pts[1]));
        assert!(c.kirkman_points.contains(&pts[2]));
        assert!(c.steiner_points.contains(&pts[3]));
        assert!(c.cayley_salmon_lines.contains(&line));

        let aux = auxiliary_conics(&s).unwrap();
        assert_eq!(aux.sc_cubic_rank, 9);
        assert!(aux.residual_online_cf);
        assert!(!aux.steiner_conic.is_degenerate());
    }

    #[test]
    fn census_counts_and_rerun() {
        let a = census(&HexScene::generate(1)).unwrap();
        assert_eq!(a.counts(), (60, 20, 60, 15, 20, 15));
        assert_eq!(a.cs_lines_per_salmon_point, 4);
        assert_eq!(a.salmon_points_per_cs_line, 3);
        let b = census(&HexScene::generate(2)).unwrap();
        assert_eq!(b.counts(), a.counts());
        assert_ne!(a.pascal_lines, b.pascal_lines);
    }
}
