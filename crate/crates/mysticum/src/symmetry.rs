//! The S₈ action on octagon labels: stabilizers of mystic conics and of
//! pencil-generating matching triples, orbits, and the type classification
//! of pencils.
//!
//! Everything here is combinatorial (stabilizers of matchings, pairs and
//! triples under relabeling); the geometric statements they certify — a
//! relabeled scene reproduces the same canonical conic — are exercised by
//! the tests and the acceptance suite against the exact octagon pipeline.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::octagon::{edge_disjoint_triples, matchings8, pair_kind, Matching, OctOrdering, PairKind};

/// A permutation of the 8 labels as an image array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub [u8; 8]);

impl Perm {
    pub fn identity() -> Self {
        Perm([0, 1, 2, 3, 4, 5, 6, 7])
    }

    /// self ∘ other: applies `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        let mut out = [0u8; 8];
        for i in 0..8 {
            out[i] = self.0[other.0[i] as usize];
        }
        Perm(out)
    }

    pub fn inverse(&self) -> Perm {
        let mut out = [0u8; 8];
        for i in 0..8 {
            out[self.0[i] as usize] = i as u8;
        }
        Perm(out)
    }

    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut n = 1;
        while p != Perm::identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }

    /// Sorted cycle lengths (including fixed points).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = [false; 8];
        let mut out = Vec::new();
        for start in 0..8 {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.0[cur] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort();
        out
    }

    /// Cycle notation over the labels A…H.
    pub fn cycle_string(&self) -> String {
        let mut seen = [false; 8];
        let mut out = String::new();
        for start in 0..8 {
            if seen[start] || self.0[start] as usize == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                out.push(char::from(b'A' + cur as u8));
                cur = self.0[cur] as usize;
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    pub fn apply_matching(&self, m: &Matching) -> Matching {
        let mut out = [(0usize, 0usize); 4];
        for (k, &(a, b)) in m.iter().enumerate() {
            let (x, y) = (self.0[a] as usize, self.0[b] as usize);
            out[k] = (x.min(y), x.max(y));
        }
        out.sort();
        out
    }

    pub fn apply_ordering(&self, o: &OctOrdering) -> OctOrdering {
        let mut arr = [0u8; 8];
        for (k, &l) in o.labels().iter().enumerate() {
            arr[k] = self.0[l as usize];
        }
        OctOrdering::new(arr).expect("permutation image of a permutation")
    }
}

/// All 40320 permutations in lexicographic order of their image arrays.
pub fn all_perms() -> Vec<Perm> {
    fn rec(arr: &mut [u8; 8], k: usize, out: &mut Vec<Perm>) {
        if k == 8 {
            out.push(Perm(*arr));
            return;
        }
        let mut rest: Vec<u8> = arr[k..].to_vec();
        rest.sort();
        for (pos, _) in rest.iter().enumerate() {
            let idx = arr[k..].iter().position(|&x| x == rest[pos]).unwrap() + k;
            arr.swap(k, idx);
            rec(arr, k + 1, out);
            // restore order of the tail
            arr[k..].sort();
            let back = arr[k..].iter().position(|&x| x == rest[pos]).unwrap() + k;
            arr.swap(k, back);
            arr[k..].sort();
        }
    }
    let mut out = Vec::with_capacity(40320);
    let mut arr = [0u8, 1, 2, 3, 4, 5, 6, 7];
    rec(&mut arr, 0, &mut out);
    out.sort();
    out.dedup();
    assert_eq!(out.len(), 40320);
    out
}

/// A materialized permutation group with its generator list.
#[derive(Debug, Clone)]
pub struct PermGroup {
    pub generators: Vec<Perm>,
    pub elements: BTreeSet<Perm>,
}

impl PermGroup {
    /// Closure of the generators under composition.
    pub fn generate(generators: Vec<Perm>) -> Self {
        let mut elements: BTreeSet<Perm> = BTreeSet::new();
        elements.insert(Perm::identity());
        let mut frontier: Vec<Perm> = vec![Perm::identity()];
        while let Some(g) = frontier.pop() {
            for h in &generators {
                let next = h.compose(&g);
                if elements.insert(next) {
                    frontier.push(next);
                }
            }
        }
        PermGroup { generators, elements }
    }

    pub fn from_elements(elements: BTreeSet<Perm>) -> Self {
        PermGroup { generators: elements.iter().copied().collect(), elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.elements.contains(g)
    }
}

/// Orbit of an object under a set of permutations and an action.
pub fn orbit<T, F>(start: &T, group: &[Perm], act: F) -> BTreeSet<T>
where
    T: Ord + Clone,
    F: Fn(&Perm, &T) -> T,
{
    group.iter().map(|g| act(g, start)).collect()
}

fn sorted_pair(a: Matching, b: Matching) -> (Matching, Matching) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Setwise stabilizer of an unordered matching pair, by brute force over S₈.
pub fn stabilizer_of_pair(m1: &Matching, m2: &Matching, perms: &[Perm]) -> PermGroup {
    let target = sorted_pair(*m1, *m2);
    let elements: BTreeSet<Perm> = perms
        .iter()
        .filter(|g| sorted_pair(g.apply_matching(m1), g.apply_matching(m2)) == target)
        .copied()
        .collect();
    PermGroup::from_elements(elements)
}

/// Stabilizer of a classical mystic conic with its dihedral structure made
/// explicit: order 16, generated by an 8-cycle and an order-2 reversal.
#[derive(Debug, Clone)]
pub struct ConicStabilizer {
    pub group: PermGroup,
    pub eight_cycle: Perm,
    pub reversal: Perm,
}

pub fn stabilizer_of_conic(o: &OctOrdering, perms: &[Perm]) -> Result<ConicStabilizer> {
    let (m1, m2) = o.side_matchings();
    let group = stabilizer_of_pair(&m1, &m2, perms);
    if group.order() != 16 {
        return Err(Error::ClassificationAnomaly(format!(
            "conic stabilizer has order {}, expected 16",
            group.order()
        )));
    }
    let eight_cycle = group
        .elements
        .iter()
        .find(|g| g.cycle_type() == vec![8])
        .copied()
        .ok_or_else(|| Error::ClassificationAnomaly("no 8-cycle in conic stabilizer".into()))?;
    let reversal = group
        .elements
        .iter()
        .find(|r| {
            r.order() == 2 && r.compose(&eight_cycle).compose(r) == eight_cycle.inverse()
        })
        .copied()
        .ok_or_else(|| Error::ClassificationAnomaly("no reversal in conic stabilizer".into()))?;
    let regenerated = PermGroup::generate(vec![eight_cycle, reversal]);
    if regenerated.order() != 16 {
        return Err(Error::ClassificationAnomaly(
            "8-cycle and reversal do not generate the stabilizer".into(),
        ));
    }
    Ok(ConicStabilizer { group, eight_cycle, reversal })
}

/// One S₈-orbit of pencil-generating triples.
#[derive(Debug, Clone)]
pub struct TripleOrbit {
    pub representative: [usize; 3],
    pub stabilizer_order: usize,
    pub size: usize,
    /// Whether the stabilizer induces a 3-cycle on the three matchings.
    pub cycles_the_triple: bool,
    /// Order of the subgroup fixing each of the three matchings.
    pub kernel_order: usize,
}

/// Classification of the pairwise-compatible matching triples (the
/// combinatorial pencils) by setwise stabilizer.
#[derive(Debug, Clone)]
pub struct PencilClassification {
    pub triples: usize,
    pub order_histogram: BTreeMap<usize, usize>,
    pub orbits: Vec<TripleOrbit>,
    /// Triples whose stabilizer cycles the three quartics (type 1) and the
    /// rest (type 2).
    pub type1_triples: usize,
    pub type2_triples: usize,
    /// Per classical conic: number of type-1 / type-2 triples through it.
    pub per_conic_type1: BTreeMap<usize, usize>,
    pub per_conic_type2: BTreeMap<usize, usize>,
}

impl PencilClassification {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "triples": self.triples,
            "stabilizer_order_histogram": self
                .order_histogram
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect::<BTreeMap<String, usize>>(),
            "orbits": self
                .orbits
                .iter()
                .map(|o| {
                    serde_json::json!({
                        "stabilizer_order": o.stabilizer_order,
                        "size": o.size,
                        "cycles_the_triple": o.cycles_the_triple,
                        "kernel_order": o.kernel_order,
                    })
                })
                .collect::<Vec<_>>(),
            "type1_triples": self.type1_triples,
            "type2_triples": self.type2_triples,
            "per_conic_type1_histogram": self
                .per_conic_type1
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect::<BTreeMap<String, usize>>(),
            "per_conic_type2_histogram": self
                .per_conic_type2
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect::<BTreeMap<String, usize>>(),
        })
    }
}

/// Classifies all pairwise-compatible triples by orbit propagation: the
/// stabilizer order is computed once per S₈-orbit and shared along it.
/// ClassificationAnomaly reports a third stabilizer order.
pub fn classify_pencils() -> Result<PencilClassification> {
    let ms = matchings8();
    let midx: BTreeMap<Matching, usize> = ms.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let perms = all_perms();

    let triples: Vec<[usize; 3]> = edge_disjoint_triples(&ms)
        .into_iter()
        .filter(|&(_, nb)| nb == 0)
        .map(|(t, _)| t)
        .collect();
    let tindex: BTreeMap<[usize; 3], usize> =
        triples.iter().enumerate().map(|(i, t)| (*t, i)).collect();

    let mut order_of = vec![0usize; triples.len()];
    let mut type1 = vec![false; triples.len()];
    let mut orbits = Vec::new();
    for start in 0..triples.len() {
        if order_of[start] != 0 {
            continue;
        }
        let t = triples[start];
        let tm = [ms[t[0]], ms[t[1]], ms[t[2]]];
        let mut stab = Vec::new();
        let mut orbit_ids = BTreeSet::new();
        for g in &perms {
            let img = [
                midx[&g.apply_matching(&tm[0])],
                midx[&g.apply_matching(&tm[1])],
                midx[&g.apply_matching(&tm[2])],
            ];
            let mut sorted = img;
            sorted.sort();
            if sorted == t {
                stab.push((*g, img));
            }
            orbit_ids.insert(sorted);
        }
        let stab_order = stab.len();
        assert_eq!(orbit_ids.len() * stab_order, perms.len(), "orbit-stabilizer identity");
        let cycles = stab.iter().any(|(_, img)| {
            img[0] == t[1] && img[1] == t[2] && img[2] == t[0]
                || img[0] == t[2] && img[1] == t[0] && img[2] == t[1]
        });
        let kernel = stab.iter().filter(|(_, img)| *img == t).count();
        orbits.push(TripleOrbit {
            representative: t,
            stabilizer_order: stab_order,
            size: orbit_ids.len(),
            cycles_the_triple: cycles,
            kernel_order: kernel,
        });
        for id in orbit_ids {
            let k = tindex[&id];
            order_of[k] = stab_order;
            type1[k] = cycles;
        }
    }

    let mut order_histogram = BTreeMap::new();
    for &o in &order_of {
        *order_histogram.entry(o).or_insert(0usize) += 1;
    }
    if order_histogram.len() > 2 {
        return Err(Error::ClassificationAnomaly(format!(
            "more than two stabilizer orders appear: {order_histogram:?}"
        )));
    }

    // per classical conic (= compatible matching pair) counts
    let mut pair_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut next = 0usize;
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            if pair_kind(&ms[i], &ms[j]) == PairKind::Cyclic {
                pair_index.insert((i, j), next);
                next += 1;
            }
        }
    }
    let mut per_conic_type1: BTreeMap<usize, usize> = BTreeMap::new();
    let mut per_conic_type2: BTreeMap<usize, usize> = BTreeMap::new();
    let mut t1_count = vec![0usize; next];
    let mut t2_count = vec![0usize; next];
    for (k, t) in triples.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let id = pair_index[&(a.min(b), a.max(b))];
            if type1[k] {
                t1_count[id] += 1;
            } else {
                t2_count[id] += 1;
            }
        }
    }
    for &n in &t1_count {
        *per_conic_type1.entry(n).or_insert(0) += 1;
    }
    for &n in &t2_count {
        *per_conic_type2.entry(n).or_insert(0) += 1;
    }

    Ok(PencilClassification {
        triples: triples.len(),
        order_histogram,
        orbits,
        type1_triples: type1.iter().filter(|&&b| b).count(),
        type2_triples: type1.iter().filter(|&&b| !b).count(),
        per_conic_type1,
        per_conic_type2,
    })
}

/// The two pencil-generating triples singled out by the classification:
/// type 1 (a Z₃ cycles the quartics) and type 2 (the stabilizer fixes each
/// quartic or swaps two).
pub fn type1_example() -> [Matching; 3] {
    // AB|CD|EF|GH, BC|DE|FG|HA, AD|CH|GE|FB
    [
        [(0, 1), (2, 3), (4, 5), (6, 7)],
        [(0, 7), (1, 2), (3, 4), (5, 6)],
        [(0, 3), (1, 5), (2, 7), (4, 6)],
    ]
}

pub fn type2_example() -> [Matching; 3] {
    // AB|CD|EF|GH, BC|DE|FG|HA, AF|CE|DG|BH
    [
        [(0, 1), (2, 3), (4, 5), (6, 7)],
        [(0, 7), (1, 2), (3, 4), (5, 6)],
        [(0, 5), (1, 7), (2, 4), (3, 6)],
    ]
}

/// Setwise stabilizer order of an explicit matching triple.
pub fn triple_stabilizer(triple: &[Matching; 3], perms: &[Perm]) -> PermGroup {
    let mut target: Vec<Matching> = triple.to_vec();
    target.sort();
    let elements: BTreeSet<Perm> = perms
        .iter()
        .filter(|g| {
            let mut img: Vec<Matching> = triple.iter().map(|m| g.apply_matching(m)).collect();
            img.sort();
            img == target
        })
        .copied()
        .collect();
    PermGroup::from_elements(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octagon::{conic_census, OctScene};
    use crate::scene::{label, Scene};

    #[test]
    fn perm_basics() {
        let perms = all_perms();
        assert_eq!(perms.len(), 40320);
        let g = Perm([1, 2, 3, 4, 5, 6, 7, 0]);
        assert_eq!(g.order(), 8);
        assert_eq!(g.cycle_type(), vec![8]);
        assert_eq!(g.compose(&g.inverse()), Perm::identity());
        assert_eq!(g.cycle_string(), "(ABCDEFGH)");
    }

    #[test]
    fn conic_stabilizer_is_dihedral_16() {
        let perms = all_perms();
        let o = OctOrdering::parse("ABCDEFGH").unwrap();
        let st = stabilizer_of_conic(&o, &perms).unwrap();
        assert_eq!(st.group.order(), 16);
        assert_eq!(st.eight_cycle.cycle_type(), vec![8]);
        assert_eq!(st.reversal.order(), 2);
    }

    #[test]
    fn conic_stabilizer_orbit_covers_all_orderings() {
        let perms = all_perms();
        let o = OctOrdering::parse("ABCDEFGH").unwrap();
        let orb = orbit(&o, &perms, |g, x| g.apply_ordering(x));
        assert_eq!(orb.len(), 2520);
        let st = stabilizer_of_conic(&o, &perms).unwrap();
        assert_eq!(orb.len() * st.group.order(), 40320);
    }

    #[test]
    fn matching_orbit_is_transitive() {
        let perms = all_perms();
        let m: Matching = [(0, 1), (2, 3), (4, 5), (6, 7)];
        let orb = orbit(&m, &perms, |g, x| g.apply_matching(x));
        assert_eq!(orb.len(), 105);
        // stabilizer order 384 = 8!/105
        let st: Vec<&Perm> = perms.iter().filter(|g| g.apply_matching(&m) == m).collect();
        assert_eq!(st.len() * 105, 40320);
    }

    #[test]
    fn two_quadrilateral_stabilizer_order() {
        let perms = all_perms();
        // AB|CD|EF|GH with BC|AD|FG|EH: union is two 4-cycles
        let m1: Matching = [(0, 1), (2, 3), (4, 5), (6, 7)];
        let m2: Matching = [(0, 3), (1, 2), (4, 7), (5, 6)];
        assert_eq!(pair_kind(&m1, &m2), PairKind::Bicyclic);
        let g = stabilizer_of_pair(&m1, &m2, &perms);
        assert_eq!(g.order(), 64);
        // includes a swap of the two quadrilaterals
        assert!(g.elements.iter().any(|p| p.0[0] >= 4));
    }

    #[test]
    fn pencil_classification() {
        let perms = all_perms();
        let cls = classify_pencils().unwrap();
        assert_eq!(cls.triples, 16800);
        assert_eq!(cls.order_histogram.get(&6), Some(&6720));
        assert_eq!(cls.order_histogram.get(&4), Some(&10080));
        assert_eq!(cls.type1_triples, 6720);
        assert_eq!(cls.type2_triples, 10080);
        assert_eq!(cls.per_conic_type1.get(&8), Some(&2520));
        assert_eq!(cls.per_conic_type2.get(&12), Some(&2520));
        for o in &cls.orbits {
            assert_eq!(o.size * o.stabilizer_order, 40320);
        }
        // the named examples fall in the right classes
        let t1 = triple_stabilizer(&type1_example(), &perms);
        assert_eq!(t1.order(), 6);
        assert!(t1.elements.iter().any(|g| g.order() == 3));
        let t2 = triple_stabilizer(&type2_example(), &perms);
        assert_eq!(t2.order(), 4);
    }

    #[test]
    fn stabilizer_acts_on_the_geometric_conic() {
        let s = OctScene::generate(3);
        let cc = conic_census(&s).unwrap();
        let perms = all_perms();
        let o = OctOrdering::parse("ABCDEFGH").unwrap();
        let st = stabilizer_of_conic(&o, &perms).unwrap();
        let (m1, m2) = o.side_matchings();
        let ms = matchings8();
        let key = |a: &Matching, b: &Matching| {
            let i = ms.iter().position(|m| m == a).unwrap();
            let j = ms.iter().position(|m| m == b).unwrap();
            (i.min(j), i.max(j))
        };
        let base = cc.classical[&key(&m1, &m2)].clone();
        for g in st.group.elements.iter().take(4) {
            // relabel the scene by g and recompute the same pair
            let relabeled = Scene {
                seed: s.scene.seed,
                conic: s.scene.conic.clone(),
                points: (0..8)
                    .map(|i| {
                        (label(i), s.scene.point(&label(g.0[i] as usize)).unwrap().clone())
                    })
                    .collect(),
                params: None,
            };
            let rs = OctScene::new(relabeled).unwrap();
            let conic = crate::octagon::mystic_conic(
                &rs,
                &rs.matching_quartic(&m1),
                &rs.matching_quartic(&m2),
            )
            .unwrap();
            assert_eq!(conic, base);
        }
    }
}
