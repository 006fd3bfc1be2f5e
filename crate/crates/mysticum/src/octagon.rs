//! Octagons inscribed in a conic: mystic conics of quartic pairs, the
//! classical 2520-conic and 630 two-quadrilateral censuses, pencils of
//! mystic conics, the generalized Steiner conic, and the 2n-gon
//! generalizations.
//!
//! Combinatorics: a matching of the 8 labels encodes a 4-line quartic. Two
//! edge-disjoint matchings union to a single 8-cycle (2520 such pairs, the
//! classical conics, one per cyclic ordering) or to two 4-cycles (630
//! two-quadrilateral pairs). Pairs sharing an edge (2310) have quartics with
//! a common line and carry no mystic conic.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::Zero;

use rayon::prelude::*;

use crate::decomposition::{in_pencil, pencil_of, residual_curve, Pencil, ResidualCertificate};
use crate::error::{Error, Result};
use crate::linalg::{int_rank, RatMatrix};
use crate::poly::{monomial_count, HomoPoly};
use crate::projective::{conic_through, join, meet, Conic, HLine, HPoint};
use crate::rat::ints_to_rats;
use crate::scene::{label, Lcg64, Scene};

/// A perfect matching of the 8 labels as sorted label pairs.
pub type Matching = [(usize, usize); 4];

/// All 105 perfect matchings, in a fixed deterministic order.
pub fn matchings8() -> Vec<Matching> {
    fn rec(free: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Matching>) {
        if free.is_empty() {
            let mut m = [(0, 0); 4];
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
    let mut out = Vec::with_capacity(105);
    rec(&[0, 1, 2, 3, 4, 5, 6, 7], &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Union type of a matching pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// The matchings share at least one edge.
    SharedEdge,
    /// Edge-disjoint, union two 4-cycles (a two-quadrilateral pair).
    Bicyclic,
    /// Edge-disjoint, union a single 8-cycle (a classical pair).
    Cyclic,
}

pub fn pair_kind(a: &Matching, b: &Matching) -> PairKind {
    if a.iter().any(|e| b.contains(e)) {
        return PairKind::SharedEdge;
    }
    // walk the 2-regular union from label 0; a union of two edge-disjoint
    // perfect matchings has only even cycles, here 8 or 4+4
    let mut adj = [[usize::MAX; 2]; 8];
    for &(x, y) in a.iter().chain(b.iter()) {
        let slot = if adj[x][0] == usize::MAX { 0 } else { 1 };
        adj[x][slot] = y;
        let slot = if adj[y][0] == usize::MAX { 0 } else { 1 };
        adj[y][slot] = x;
    }
    let mut prev = usize::MAX;
    let mut cur = 0usize;
    let mut len = 0usize;
    loop {
        let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
        prev = cur;
        cur = next;
        len += 1;
        if cur == 0 {
            break;
        }
    }
    if len == 8 {
        PairKind::Cyclic
    } else {
        PairKind::Bicyclic
    }
}

/// Cyclic labeling of an octagon modulo the dihedral group of order 16;
/// exactly 2520 classes exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OctOrdering([u8; 8]);

impl OctOrdering {
    pub fn new(perm: [u8; 8]) -> Result<Self> {
        let mut seen = [false; 8];
        for &x in &perm {
            if x > 7 || seen[x as usize] {
                return Err(Error::Precondition("not a permutation of 8 labels".into()));
            }
            seen[x as usize] = true;
        }
        let mut best = perm;
        for s in 0..8 {
            let mut rot = [0u8; 8];
            let mut rev = [0u8; 8];
            for k in 0..8 {
                rot[k] = perm[(k + s) % 8];
                rev[k] = perm[(s + 8 - k) % 8];
            }
            if rot < best {
                best = rot;
            }
            if rev < best {
                best = rev;
            }
        }
        Ok(OctOrdering(best))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bytes: Vec<u8> = s.bytes().map(|b| b.wrapping_sub(b'A')).collect();
        if bytes.len() != 8 {
            return Err(Error::Precondition("ordering needs 8 labels".into()));
        }
        let mut arr = [0u8; 8];
        arr.copy_from_slice(&bytes);
        OctOrdering::new(arr)
    }

    pub fn labels(&self) -> &[u8; 8] {
        &self.0
    }

    /// The two alternating side matchings.
    pub fn side_matchings(&self) -> (Matching, Matching) {
        let edge = |k: usize| {
            let a = self.0[k] as usize;
            let b = self.0[(k + 1) % 8] as usize;
            (a.min(b), a.max(b))
        };
        let mut m1 = [edge(0), edge(2), edge(4), edge(6)];
        let mut m2 = [edge(1), edge(3), edge(5), edge(7)];
        m1.sort();
        m2.sort();
        (m1, m2)
    }

    /// Rebuilds the ordering carried by a cyclic matching pair.
    pub fn from_cyclic_pair(a: &Matching, b: &Matching) -> Result<Self> {
        if pair_kind(a, b) != PairKind::Cyclic {
            return Err(Error::Precondition("pair does not union to an 8-cycle".into()));
        }
        let mut adj = [[usize::MAX; 2]; 8];
        for &(x, y) in a.iter().chain(b.iter()) {
            let slot = if adj[x][0] == usize::MAX { 0 } else { 1 };
            adj[x][slot] = y;
            let slot = if adj[y][0] == usize::MAX { 0 } else { 1 };
            adj[y][slot] = x;
        }
        let mut cycle = [0u8; 8];
        let mut prev = usize::MAX;
        let mut cur = 0usize;
        for slot in cycle.iter_mut() {
            *slot = cur as u8;
            let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
            prev = cur;
            cur = next;
        }
        OctOrdering::new(cycle)
    }

    pub fn all() -> Vec<OctOrdering> {
        let ms = matchings8();
        let mut out = BTreeSet::new();
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                if pair_kind(&ms[i], &ms[j]) == PairKind::Cyclic {
                    out.insert(OctOrdering::from_cyclic_pair(&ms[i], &ms[j]).unwrap());
                }
            }
        }
        out.into_iter().collect()
    }
}

impl std::fmt::Display for OctOrdering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", char::from(b'A' + b))?;
        }
        Ok(())
    }
}

/// A scene with exactly 8 labeled vertices A…H on the base conic.
#[derive(Debug, Clone)]
pub struct OctScene {
    pub scene: Scene,
    points: Vec<HPoint>,
}

impl OctScene {
    pub fn new(scene: Scene) -> Result<Self> {
        let mut points = Vec::with_capacity(8);
        for i in 0..8 {
            let p = scene.point(&label(i))?.clone();
            if !scene.conic.contains(&p) {
                return Err(Error::InvalidScene(format!("{} not on conic", label(i))));
            }
            if points.contains(&p) {
                return Err(Error::InvalidScene("duplicate vertices".into()));
            }
            points.push(p);
        }
        Ok(OctScene { scene, points })
    }

    pub fn generate(seed: u64) -> Self {
        OctScene::new(Scene::octagon(seed)).expect("generated scenes are valid")
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

    /// The decomposable quartic of a matching: product of its four chords.
    pub fn matching_quartic(&self, m: &Matching) -> HomoPoly {
        let mut acc = self.line(m[0].0, m[0].1).as_poly();
        for &(a, b) in &m[1..] {
            acc = acc.mul(&self.line(a, b).as_poly());
        }
        acc
    }

    pub fn quartic_through_all(&self, q: &HomoPoly) -> bool {
        q.degree() == 4 && self.points.iter().all(|p| q.eval_ints(p.coords()).is_zero())
    }

    /// Random quartic through all eight vertices (7-dimensional system).
    pub fn random_quartic(&self, rng: &mut Lcg64, avoid: &[HomoPoly]) -> HomoPoly {
        let rows: Vec<Vec<crate::rat::Rat>> = self
            .points
            .iter()
            .map(|p| ints_to_rats(&crate::projective::eval_row(4, p)))
            .collect();
        let basis = RatMatrix::from_rows(rows).nullspace();
        assert_eq!(basis.len(), 7, "eight conic points give a 7-dimensional quartic system");
        loop {
            let cs: Vec<i64> = (0..7).map(|_| rng.small_coeff()).collect();
            if cs.iter().all(|&c| c == 0) {
                continue;
            }
            let mut v = vec![BigInt::zero(); 15];
            for (c, b) in cs.iter().zip(&basis) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += BigInt::from(*c) * bi;
                }
            }
            let Some(poly) = HomoPoly::from_ints(4, v) else { continue };
            if avoid.contains(&poly) {
                continue;
            }
            return poly;
        }
    }

    /// Three random quartics through the eight vertices with independent
    /// coefficient vectors.
    pub fn random_quartic_triple(&self, rng: &mut Lcg64) -> [HomoPoly; 3] {
        loop {
            let q1 = self.random_quartic(rng, &[]);
            let q2 = self.random_quartic(rng, &[q1.clone()]);
            let q3 = self.random_quartic(rng, &[q1.clone(), q2.clone()]);
            let rows = vec![
                q1.coeffs().to_vec(),
                q2.coeffs().to_vec(),
                q3.coeffs().to_vec(),
            ];
            if int_rank(rows, 15) == 3 {
                return [q1, q2, q3];
            }
        }
    }

    /// A nondegenerate conic through four labeled vertices and a seeded free
    /// point off the base conic.
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

/// Mystic conic of two distinct quartics through the eight vertices, with
/// its residual certificate.
pub fn mystic_conic_certificate(
    s: &OctScene,
    q1: &HomoPoly,
    q2: &HomoPoly,
) -> Result<(Conic, ResidualCertificate)> {
    for q in [q1, q2] {
        if !s.quartic_through_all(q) {
            return Err(Error::Precondition("quartic does not pass through all vertices".into()));
        }
    }
    let cert = residual_curve(q1, q2, s.conic(), s.vertices())?;
    let conic = Conic::from_poly(cert.residual.clone())?;
    Ok((conic, cert))
}

pub fn mystic_conic(s: &OctScene, q1: &HomoPoly, q2: &HomoPoly) -> Result<Conic> {
    Ok(mystic_conic_certificate(s, q1, q2)?.0)
}

/// The 8 rational cross-meets of a cyclic matching pair: each chord of one
/// matching meets the two non-adjacent chords of the other off the conic.
fn classical_cross_meets(s: &OctScene, m1: &Matching, m2: &Matching) -> Result<Vec<HPoint>> {
    let mut out = Vec::with_capacity(8);
    for &(a, b) in m1 {
        for &(c, d) in m2 {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            out.push(meet(&s.line(a, b), &s.line(c, d))?);
        }
    }
    Ok(out)
}

/// Classical mystic conic of an ordering: the residual conic of its two
/// alternating side quartics, verified against the 8 rational side meets.
pub fn classical_conic(s: &OctScene, o: &OctOrdering) -> Result<Conic> {
    let (m1, m2) = o.side_matchings();
    let conic = mystic_conic(s, &s.matching_quartic(&m1), &s.matching_quartic(&m2))?;
    let meets = classical_cross_meets(s, &m1, &m2)?;
    if meets.len() != 8 || !meets.iter().all(|p| conic.contains(p)) {
        return Err(Error::CensusMismatch(
            "classical conic misses one of its 8 side meets".into(),
        ));
    }
    Ok(conic)
}

/// Full conic census: all classical and two-quadrilateral conics keyed by
/// matching pair, with every exact count checked.
#[derive(Debug, Clone)]
pub struct OctConicCensus {
    pub matchings: Vec<Matching>,
    /// Conics of cyclic pairs, keyed by sorted matching index pair.
    pub classical: BTreeMap<(usize, usize), Conic>,
    /// Conics of bicyclic pairs.
    pub two_quad: BTreeMap<(usize, usize), Conic>,
    pub shared_edge_pairs: usize,
}

impl OctConicCensus {
    pub fn to_json(&self, scene: &Scene) -> serde_json::Value {
        let dump = |m: &BTreeMap<(usize, usize), Conic>| -> Vec<serde_json::Value> {
            m.iter()
                .map(|(&(i, j), c)| {
                    serde_json::json!({
                        "pair": [i, j],
                        "conic": c.form().coeff_strings(),
                    })
                })
                .collect()
        };
        serde_json::json!({
            "scene_hash": scene.hash(),
            "tool_version": env!("CARGO_PKG_VERSION"),
            "counts": {
                "matchings": self.matchings.len(),
                "classical_conics": self.classical.len(),
                "two_quadrilateral_conics": self.two_quad.len(),
                "shared_edge_pairs": self.shared_edge_pairs,
            },
            "classical": dump(&self.classical),
            "two_quadrilateral": dump(&self.two_quad),
        })
    }
}

pub fn conic_census(s: &OctScene) -> Result<OctConicCensus> {
    let ms = matchings8();
    if ms.len() != 105 {
        return Err(Error::CensusMismatch(format!("matchings: expected 105, got {}", ms.len())));
    }
    let mut cyclic_pairs = Vec::new();
    let mut bicyclic_pairs = Vec::new();
    let mut shared = 0usize;
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            match pair_kind(&ms[i], &ms[j]) {
                PairKind::Cyclic => cyclic_pairs.push((i, j)),
                PairKind::Bicyclic => bicyclic_pairs.push((i, j)),
                PairKind::SharedEdge => shared += 1,
            }
        }
    }
    if cyclic_pairs.len() != 2520 || bicyclic_pairs.len() != 630 || shared != 2310 {
        return Err(Error::CensusMismatch(format!(
            "pair kinds: expected 2520/630/2310, got {}/{}/{}",
            cyclic_pairs.len(),
            bicyclic_pairs.len(),
            shared
        )));
    }

    let conic_of = |&(i, j): &(usize, usize)| -> Result<((usize, usize), Conic)> {
        let q1 = s.matching_quartic(&ms[i]);
        let q2 = s.matching_quartic(&ms[j]);
        let conic = mystic_conic(s, &q1, &q2)?;
        let meets = classical_cross_meets(s, &ms[i], &ms[j])?;
        if meets.len() != 8 || !meets.iter().all(|p| conic.contains(p)) {
            return Err(Error::CensusMismatch(format!(
                "conic of pair ({i},{j}) misses one of its 8 chord meets"
            )));
        }
        Ok(((i, j), conic))
    };

    let classical: BTreeMap<(usize, usize), Conic> =
        cyclic_pairs.par_iter().map(conic_of).collect::<Result<_>>()?;
    let two_quad: BTreeMap<(usize, usize), Conic> =
        bicyclic_pairs.par_iter().map(conic_of).collect::<Result<_>>()?;

    let distinct_classical: BTreeSet<&Conic> = classical.values().collect();
    if distinct_classical.len() != 2520 {
        return Err(Error::CensusMismatch(format!(
            "distinct classical conics: expected 2520, got {}",
            distinct_classical.len()
        )));
    }
    let distinct_two_quad: BTreeSet<&Conic> = two_quad.values().collect();
    if distinct_two_quad.len() != 630 {
        return Err(Error::CensusMismatch(format!(
            "distinct two-quadrilateral conics: expected 630, got {}",
            distinct_two_quad.len()
        )));
    }
    if distinct_classical.intersection(&distinct_two_quad).next().is_some() {
        return Err(Error::CensusMismatch(
            "classical and two-quadrilateral conics overlap".into(),
        ));
    }

    Ok(OctConicCensus {
        matchings: ms,
        classical,
        two_quad,
        shared_edge_pairs: shared,
    })
}

/// Pencil census over matching triples. `compatible` covers triples whose
/// three pair-unions are all 8-cycles (every pair conic classical);
/// `edge_disjoint` additionally admits bicyclic pairs (two-quadrilateral
/// conics among the three). Both families verify the pencil condition
/// exactly and are keyed by canonical pencil basis.
#[derive(Debug, Clone)]
pub struct OctPencilCensus {
    pub compatible_triples: usize,
    pub compatible_distinct_pencils: usize,
    /// classical-conic → number of compatible-triple pencils through it
    pub per_conic_compatible: BTreeMap<(usize, usize), usize>,
    pub edge_disjoint_triples: usize,
    pub edge_disjoint_distinct_pencils: usize,
    /// triple counts by number of bicyclic pairs (0, 1, 2, 3)
    pub edge_disjoint_by_bicyclic: [usize; 4],
    pub per_conic_edge_disjoint: BTreeMap<(usize, usize), usize>,
    /// canonical pencil keys of the compatible family
    pub compatible_pencils: BTreeSet<Pencil>,
}

impl OctPencilCensus {
    pub fn per_conic_compatible_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &n in self.per_conic_compatible.values() {
            *h.entry(n).or_insert(0) += 1;
        }
        h
    }

    pub fn per_conic_edge_disjoint_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &n in self.per_conic_edge_disjoint.values() {
            *h.entry(n).or_insert(0) += 1;
        }
        h
    }

    pub fn to_json(&self, scene: &Scene) -> serde_json::Value {
        serde_json::json!({
            "scene_hash": scene.hash(),
            "tool_version": env!("CARGO_PKG_VERSION"),
            "compatible_triples": self.compatible_triples,
            "compatible_distinct_pencils": self.compatible_distinct_pencils,
            "per_conic_compatible_histogram": self
                .per_conic_compatible_histogram()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect::<BTreeMap<String, usize>>(),
            "edge_disjoint_triples": self.edge_disjoint_triples,
            "edge_disjoint_distinct_pencils": self.edge_disjoint_distinct_pencils,
            "edge_disjoint_by_bicyclic_pairs": self.edge_disjoint_by_bicyclic,
            "per_conic_edge_disjoint_histogram": self
                .per_conic_edge_disjoint_histogram()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect::<BTreeMap<String, usize>>(),
        })
    }
}

/// All pairwise edge-disjoint matching index triples with the number of
/// bicyclic pairs each contains (0 means pairwise compatible).
pub fn edge_disjoint_triples(ms: &[Matching]) -> Vec<([usize; 3], usize)> {
    let n = ms.len();
    let mut kind = vec![vec![PairKind::SharedEdge; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let k = pair_kind(&ms[i], &ms[j]);
            kind[i][j] = k;
            kind[j][i] = k;
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if kind[i][j] == PairKind::SharedEdge {
                continue;
            }
            for k in j + 1..n {
                if kind[i][k] == PairKind::SharedEdge || kind[j][k] == PairKind::SharedEdge {
                    continue;
                }
                let nb = [kind[i][j], kind[i][k], kind[j][k]]
                    .iter()
                    .filter(|&&x| x == PairKind::Bicyclic)
                    .count();
                out.push(([i, j, k], nb));
            }
        }
    }
    out
}

pub fn pencil_census(_s: &OctScene, conics: &OctConicCensus) -> Result<OctPencilCensus> {
    let ms = &conics.matchings;
    let triples = edge_disjoint_triples(ms);
    let conic_of = |i: usize, j: usize| -> &Conic {
        let key = (i.min(j), i.max(j));
        conics
            .classical
            .get(&key)
            .or_else(|| conics.two_quad.get(&key))
            .expect("edge-disjoint pair has a conic")
    };

    let keyed: Vec<([usize; 3], usize, Pencil)> = triples
        .par_iter()
        .map(|&(t, nb)| -> Result<([usize; 3], usize, Pencil)> {
            let c1 = conic_of(t[1], t[2]);
            let c2 = conic_of(t[0], t[2]);
            let c3 = conic_of(t[0], t[1]);
            let pencil = pencil_of(c1.form(), c2.form())?;
            if !in_pencil(c3.form(), &pencil) {
                return Err(Error::PencilViolation);
            }
            Ok((t, nb, pencil))
        })
        .collect::<Result<_>>()?;

    let mut compatible_pencils = BTreeSet::new();
    let mut all_pencils = BTreeSet::new();
    let mut per_conic_compatible: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut per_conic_edge_disjoint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for key in conics.classical.keys() {
        per_conic_compatible.insert(*key, 0);
        per_conic_edge_disjoint.insert(*key, 0);
    }
    let mut by_bicyclic = [0usize; 4];
    let mut compatible_triples = 0usize;
    for (t, nb, pencil) in &keyed {
        by_bicyclic[*nb] += 1;
        all_pencils.insert(pencil.clone());
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let key = (a.min(b), a.max(b));
            if conics.classical.contains_key(&key) {
                *per_conic_edge_disjoint.get_mut(&key).unwrap() += 1;
                if *nb == 0 {
                    *per_conic_compatible.get_mut(&key).unwrap() += 1;
                }
            }
        }
        if *nb == 0 {
            compatible_triples += 1;
            compatible_pencils.insert(pencil.clone());
        }
    }

    Ok(OctPencilCensus {
        compatible_triples,
        compatible_distinct_pencils: compatible_pencils.len(),
        per_conic_compatible,
        edge_disjoint_triples: keyed.len(),
        edge_disjoint_distinct_pencils: all_pencils.len(),
        edge_disjoint_by_bicyclic: by_bicyclic,
        per_conic_edge_disjoint,
        compatible_pencils,
    })
}

/// How the Yᵢ mystic conics pair the C and D conics; entry i holds the
/// (C index, D index) used by Yᵢ. The default is the cyclic transversal
/// (Y₁ = C₃·D₂, Y₂ = C₁·D₃, Y₃ = C₂·D₁), under which every Xᵢ, Yⱼ pair with
/// i ≠ j shares exactly one factor and the common member exists exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SteinerConicPairing(pub [(usize, usize); 3]);

impl Default for SteinerConicPairing {
    fn default() -> Self {
        SteinerConicPairing([(2, 1), (0, 2), (1, 0)])
    }
}

/// The generalized Steiner conic: the common member of the three pencils
/// spanned by (Xᵢ, Yᵢ). Returns the member with the Xᵢ and Yᵢ conics.
pub fn generalized_steiner_conic(
    s: &OctScene,
    q: &HomoPoly,
    cs: &[Conic; 3],
    ds: &[Conic; 3],
    pairing: SteinerConicPairing,
) -> Result<(Conic, [Conic; 3], [Conic; 3])> {
    if !s.quartic_through_all(q) {
        return Err(Error::Precondition("quartic does not pass through all vertices".into()));
    }
    for (c, pts) in [(cs, [0, 1, 2, 3]), (ds, [4, 5, 6, 7])] {
        for conic in c {
            if !pts.iter().all(|&i| conic.contains(s.vertex(i))) {
                return Err(Error::Precondition(
                    "conic does not pass through its four vertices".into(),
                ));
            }
        }
        if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
            return Err(Error::Precondition("the three conics must be distinct".into()));
        }
    }
    let product = |ci: usize, di: usize| cs[ci].form().mul(ds[di].form());
    for i in 0..3 {
        for j in 0..3 {
            if product(i, j) == *q {
                return Err(Error::Precondition(
                    "quartic coincides with a product conic pair".into(),
                ));
            }
        }
    }
    let mut xs = Vec::with_capacity(3);
    let mut ys = Vec::with_capacity(3);
    for i in 0..3 {
        xs.push(mystic_conic(s, q, &product(i, i))?);
        let (ci, di) = pairing.0[i];
        ys.push(mystic_conic(s, q, &product(ci, di))?);
    }
    let pencils = [
        pencil_of(xs[0].form(), ys[0].form())?,
        pencil_of(xs[1].form(), ys[1].form())?,
        pencil_of(xs[2].form(), ys[2].form())?,
    ];
    let member = common_member_or_err(&pencils)?;
    let conic = Conic::from_poly(member)?;
    Ok((
        conic,
        [xs[0].clone(), xs[1].clone(), xs[2].clone()],
        [ys[0].clone(), ys[1].clone(), ys[2].clone()],
    ))
}

fn common_member_or_err(pencils: &[Pencil]) -> Result<HomoPoly> {
    crate::decomposition::common_member(pencils)?.ok_or(Error::NoCommonMember)
}

/// Certificates for a 2n-gon: the residual degree-(n−2) curve of a pair of
/// degree-n curves through all 2n vertices; with three curves, additionally
/// checks the three pairwise residuals span one pencil.
#[derive(Debug, Clone)]
pub struct PolygonCertificates {
    pub certificates: Vec<ResidualCertificate>,
    /// Rank of the stacked residual coefficient vectors when three curves
    /// are supplied (2 means one pencil).
    pub residual_rank: Option<usize>,
}

pub fn polygon_general(
    scene: &Scene,
    curves: &[HomoPoly],
) -> Result<PolygonCertificates> {
    let points = scene.point_vec();
    if points.len() < 6 || points.len() % 2 != 0 {
        return Err(Error::Precondition("scene must have 2n ≥ 6 labeled vertices".into()));
    }
    let n = points.len() / 2;
    if !(curves.len() == 2 || curves.len() == 3) {
        return Err(Error::Precondition("two or three curves expected".into()));
    }
    for c in curves {
        if c.degree() != n {
            return Err(Error::DegreeMismatch { expected: n, got: c.degree() });
        }
        if !points.iter().all(|p| c.eval_ints(p.coords()).is_zero()) {
            return Err(Error::Precondition("curve does not pass through all vertices".into()));
        }
    }
    let mut certificates = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            certificates.push(residual_curve(&curves[i], &curves[j], &scene.conic, &points)?);
        }
    }
    let residual_rank = if curves.len() == 3 {
        let rows: Vec<Vec<BigInt>> =
            certificates.iter().map(|c| c.residual.coeffs().to_vec()).collect();
        Some(int_rank(rows, monomial_count(n - 2)))
    } else {
        None
    };
    Ok(PolygonCertificates { certificates, residual_rank })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_and_ordering_counts() {
        let ms = matchings8();
        assert_eq!(ms.len(), 105);
        let mut cyclic = 0;
        let mut bicyclic = 0;
        let mut shared = 0;
        for i in 0..105 {
            for j in i + 1..105 {
                match pair_kind(&ms[i], &ms[j]) {
                    PairKind::Cyclic => cyclic += 1,
                    PairKind::Bicyclic => bicyclic += 1,
                    PairKind::SharedEdge => shared += 1,
                }
            }
        }
        assert_eq!((cyclic, bicyclic, shared), (2520, 630, 2310));
        // each matching is compatible with exactly 48 others
        for i in 0..105 {
            let n = (0..105)
                .filter(|&j| j != i && pair_kind(&ms[i], &ms[j]) == PairKind::Cyclic)
                .count();
            assert_eq!(n, 48);
        }
        assert_eq!(OctOrdering::all().len(), 2520);
    }

    #[test]
    fn ordering_dihedral_invariance() {
        let a = OctOrdering::parse("ABCDEFGH").unwrap();
        let b = OctOrdering::parse("BCDEFGHA").unwrap();
        let c = OctOrdering::parse("HGFEDCBA").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn classical_conic_passes_through_its_meets() {
        let s = OctScene::generate(5);
        let o = OctOrdering::parse("ABCDEFGH").unwrap();
        let conic = classical_conic(&s, &o).unwrap();
        assert!(!conic.is_degenerate());
        // reversal gives the identical canonical conic
        let rev = OctOrdering::parse("AHGFEDCB").unwrap();
        assert_eq!(classical_conic(&s, &rev).unwrap(), conic);
    }

    #[test]
    fn mystic_conic_rejects_equal_quartics() {
        let s = OctScene::generate(5);
        let (m1, _) = OctOrdering::parse("ABCDEFGH").unwrap().side_matchings();
        let q = s.matching_quartic(&m1);
        assert_eq!(mystic_conic(&s, &q, &q), Err(Error::DependentCurves));
    }

    #[test]
    fn pencil_condition_for_random_quartic_triples() {
        let s = OctScene::generate(9);
        let mut rng = s.scene.rng(53);
        for _ in 0..5 {
            let q1 = s.random_quartic(&mut rng, &[]);
            let q2 = s.random_quartic(&mut rng, &[q1.clone()]);
            let q3 = s.random_quartic(&mut rng, &[q1.clone(), q2.clone()]);
            let c1 = mystic_conic(&s, &q2, &q3).unwrap();
            let c2 = mystic_conic(&s, &q1, &q3).unwrap();
            let c3 = mystic_conic(&s, &q1, &q2).unwrap();
            let rows = vec![
                c1.form().coeffs().to_vec(),
                c2.form().coeffs().to_vec(),
                c3.form().coeffs().to_vec(),
            ];
            assert_eq!(int_rank(rows, 6), 2);
        }
    }

    #[test]
    fn generalized_steiner_conic_exists_under_cyclic_pairing() {
        let s = OctScene::generate(21);
        let mut rng = s.scene.rng(56);
        let cs = [
            s.conic_through_four([0, 1, 2, 3], &mut rng),
            s.conic_through_four([0, 1, 2, 3], &mut rng),
            s.conic_through_four([0, 1, 2, 3], &mut rng),
        ];
        let ds = [
            s.conic_through_four([4, 5, 6, 7], &mut rng),
            s.conic_through_four([4, 5, 6, 7], &mut rng),
            s.conic_through_four([4, 5, 6, 7], &mut rng),
        ];
        let q = s.random_quartic(&mut rng, &[]);
        let (member, xs, ys) =
            generalized_steiner_conic(&s, &q, &cs, &ds, SteinerConicPairing::default()).unwrap();
        for i in 0..3 {
            let p = pencil_of(xs[i].form(), ys[i].form()).unwrap();
            assert!(in_pencil(member.form(), &p));
        }
    }

    #[test]
    fn decagon_certificates() {
        let scene = Scene::inscribed(31, 10);
        // three pairwise edge-disjoint matchings of the 10 labels
        let m1 = [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)];
        let m2 = [(1, 2), (3, 4), (5, 6), (7, 8), (9, 0)];
        let m3 = [(0, 2), (1, 4), (3, 6), (5, 8), (7, 9)];
        let pts = scene.point_vec();
        let quintic = |m: &[(usize, usize); 5]| {
            let mut acc = join(&pts[m[0].0], &pts[m[0].1]).unwrap().as_poly();
            for &(a, b) in &m[1..] {
                acc = acc.mul(&join(&pts[a], &pts[b]).unwrap().as_poly());
            }
            acc
        };
        let out =
            polygon_general(&scene, &[quintic(&m1), quintic(&m2), quintic(&m3)]).unwrap();
        assert_eq!(out.certificates.len(), 3);
        for c in &out.certificates {
            assert!(c.verify());
            assert_eq!(c.residual.degree(), 3);
        }
        assert_eq!(out.residual_rank, Some(2));
    }

    #[test]
    fn hexagon_case_reduces_to_pascal() {
        let scene = Scene::hexagon(13);
        let hex = crate::hexagon::HexScene::new(scene.clone()).unwrap();
        let d1 = hex.matching_cubic(&[(0, 1), (2, 3), (4, 5)]);
        let d2 = hex.matching_cubic(&[(0, 5), (1, 2), (3, 4)]);
        let out = polygon_general(&scene, &[d1.clone(), d2.clone()]).unwrap();
        assert_eq!(out.certificates[0].residual.degree(), 1);
        let via_hex = crate::hexagon::generalized_pascal_line(&hex, &d1, &d2).unwrap();
        assert_eq!(out.certificates[0].residual, via_hex.as_poly());
    }
}
