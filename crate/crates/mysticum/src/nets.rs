//! k-nets of lines and of conics.
//!
//! The (3,4) line net: with the free cubic of the generalized Steiner line
//! taken decomposable, the four p-lines, the four q-lines, and the three
//! chords together with the Steiner line form three classes of four lines
//! whose 16 pairwise cross-class meets each lie on exactly one line of
//! every class.
//!
//! A k-net of conics is k pairwise disjoint conic classes plus a pencil set
//! such that every cross-class pair spans a listed pencil and every listed
//! pencil meets each class exactly once; for k ≥ 3 the classes share one
//! cardinality d and there are exactly d² pencils.

use std::collections::BTreeSet;

use crate::decomposition::{in_pencil, pencil_of, Pencil};
use crate::error::{Error, Result};
use crate::hexagon::{steiner_line_construction, HexScene};
use crate::linalg::int_rank;
use crate::octagon::{generalized_steiner_conic, OctScene, SteinerConicPairing};
use crate::poly::HomoPoly;
use crate::projective::{meet, Conic, HLine, HPoint};

/// Classes of lines with their incidence point set.
#[derive(Debug, Clone)]
pub struct LineNet {
    pub classes: Vec<Vec<HLine>>,
    pub points: BTreeSet<HPoint>,
}

/// Checks the line-net conditions: distinct lines, pairwise disjoint
/// classes, every cross-class meet in the point set, and every point on
/// exactly one line of each class.
pub fn validate_line_net(net: &LineNet) -> Result<()> {
    let mut all_lines = BTreeSet::new();
    for (ci, class) in net.classes.iter().enumerate() {
        for l in class {
            if !all_lines.insert(l.clone()) {
                return Err(Error::NetViolation(format!(
                    "line repeated in or across classes (class {ci})"
                )));
            }
        }
    }
    for i in 0..net.classes.len() {
        for j in i + 1..net.classes.len() {
            for a in &net.classes[i] {
                for b in &net.classes[j] {
                    let x = meet(a, b)?;
                    if !net.points.contains(&x) {
                        return Err(Error::NetViolation(format!(
                            "meet of classes {i} and {j} is not a net point"
                        )));
                    }
                }
            }
        }
    }
    for p in &net.points {
        for (ci, class) in net.classes.iter().enumerate() {
            let n = class.iter().filter(|l| p.on_line(l)).count();
            if n != 1 {
                return Err(Error::NetViolation(format!(
                    "a net point lies on {n} lines of class {ci}, expected exactly 1"
                )));
            }
        }
    }
    Ok(())
}

/// Builds and validates the (3,4) line net of a hexagon scene: classes
/// {p₁..p₄}, {q₁..q₄} and the three chords of l(AF)·l(BE)·l(CD) plus the
/// Steiner line, with the 16 cross meets as points.
pub fn build_line_net(s: &HexScene) -> Result<LineNet> {
    // D = l(AF)·l(BE)·l(CD)
    let m: crate::hexagon::Matching6 = [(0, 5), (1, 4), (2, 3)];
    let d = s.matching_cubic(&m);
    let data = steiner_line_construction(s, &d)?;
    let chords = data
        .companion_lines
        .ok_or_else(|| Error::NetViolation("free cubic is not decomposable".into()))?;
    let mut third = chords.to_vec();
    third.push(data.line.clone());
    let classes = vec![data.p_lines.to_vec(), data.q_lines.to_vec(), third];
    let mut points = BTreeSet::new();
    for p in &data.p_lines {
        for q in &data.q_lines {
            points.insert(meet(p, q)?);
        }
    }
    if points.len() != 16 {
        return Err(Error::NetViolation(format!(
            "expected 16 distinct cross points, got {}",
            points.len()
        )));
    }
    let net = LineNet { classes, points };
    validate_line_net(&net)?;
    Ok(net)
}

/// Classes of conics with their synthesized pencil set.
#[derive(Debug, Clone)]
pub struct ConicNet {
    pub classes: Vec<Vec<Conic>>,
    pub pencils: BTreeSet<Pencil>,
}

/// Per-condition report of the conic-net validator.
#[derive(Debug, Clone)]
pub struct ConicNetReport {
    /// Classes are pairwise disjoint and duplicate-free.
    pub disjoint_classes: bool,
    /// Every cross-class pair spans a pencil (and it is in the set).
    pub cross_pairs_in_set: bool,
    /// Every pencil meets each class in exactly one conic.
    pub one_per_class: bool,
    /// Equal class cardinality (k ≥ 3 requirement); None for k < 3.
    pub common_degree: Option<usize>,
    /// Whether |pencils| = d².
    pub pencil_count_is_degree_squared: Option<bool>,
    pub pencil_count: usize,
    pub failures: Vec<String>,
}

impl ConicNetReport {
    pub fn is_valid(&self) -> bool {
        self.disjoint_classes
            && self.cross_pairs_in_set
            && self.one_per_class
            && self.pencil_count_is_degree_squared.unwrap_or(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "disjoint_classes": self.disjoint_classes,
            "cross_pairs_in_set": self.cross_pairs_in_set,
            "one_per_class": self.one_per_class,
            "common_degree": self.common_degree,
            "pencil_count": self.pencil_count,
            "pencil_count_is_degree_squared": self.pencil_count_is_degree_squared,
            "valid": self.is_valid(),
            "failures": self.failures,
        })
    }
}

/// Synthesizes the pencil set as all cross-class pencils and checks the
/// net conditions, reporting per condition rather than erroring.
pub fn validate_conic_net(classes: &[Vec<Conic>]) -> (ConicNet, ConicNetReport) {
    let mut failures = Vec::new();
    let mut disjoint = true;
    let mut seen = BTreeSet::new();
    for (ci, class) in classes.iter().enumerate() {
        for c in class {
            if !seen.insert(c.clone()) {
                disjoint = false;
                failures.push(format!("condition 1: conic repeated (class {ci})"));
            }
        }
    }

    let mut pencils = BTreeSet::new();
    let mut cross_ok = true;
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            for a in &classes[i] {
                for b in &classes[j] {
                    match pencil_of(a.form(), b.form()) {
                        Ok(p) => {
                            pencils.insert(p);
                        }
                        Err(_) => {
                            cross_ok = false;
                            failures.push(format!(
                                "condition 2: a cross pair of classes {i},{j} spans no pencil"
                            ));
                        }
                    }
                }
            }
        }
    }

    let mut one_per_class = true;
    for p in &pencils {
        for (ci, class) in classes.iter().enumerate() {
            let n = class.iter().filter(|c| in_pencil(c.form(), p)).count();
            if n != 1 {
                one_per_class = false;
                failures.push(format!(
                    "condition 3: a pencil meets class {ci} in {n} conics, expected 1"
                ));
            }
        }
    }

    let (common_degree, squared) = if classes.len() >= 3 {
        let sizes: BTreeSet<usize> = classes.iter().map(|c| c.len()).collect();
        if sizes.len() == 1 {
            let d = *sizes.iter().next().unwrap();
            (Some(d), Some(pencils.len() == d * d))
        } else {
            failures.push("cardinality: classes have different sizes".into());
            (None, Some(false))
        }
    } else {
        (None, None)
    };

    let report = ConicNetReport {
        disjoint_classes: disjoint,
        cross_pairs_in_set: cross_ok,
        one_per_class,
        common_degree,
        pencil_count_is_degree_squared: squared,
        pencil_count: pencils.len(),
        failures,
    };
    (ConicNet { classes: classes.to_vec(), pencils }, report)
}

/// The conic net with classes {X₁,X₂,X₃}, {Y₁,Y₂,Y₃}, {C₄,D₄,S} built from
/// the generalized Steiner conic with quartic Q = C₄·D₄.
pub fn example_conic_net(s: &OctScene) -> Result<(ConicNet, ConicNetReport)> {
    let mut rng = s.scene.rng(88);
    let c4 = s.conic_through_four([0, 1, 2, 3], &mut rng);
    let d4 = s.conic_through_four([4, 5, 6, 7], &mut rng);
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
    let q = c4.form().mul(d4.form());
    let (member, xs, ys) =
        generalized_steiner_conic(s, &q, &cs, &ds, SteinerConicPairing::default())?;
    let classes = vec![xs.to_vec(), ys.to_vec(), vec![c4, d4, member]];
    Ok(validate_conic_net(&classes))
}

/// Conic classes as point sets in the 5-dimensional projective space of
/// conics, pencils as lines (2-planes of coefficient vectors). Re-validates
/// the reformulated conditions with raw rank computations.
#[derive(Debug, Clone)]
pub struct P5Model {
    pub point_classes: Vec<Vec<HomoPoly>>,
    pub lines: Vec<[HomoPoly; 2]>,
}

pub fn net_as_p5(net: &ConicNet) -> Result<P5Model> {
    let point_classes: Vec<Vec<HomoPoly>> = net
        .classes
        .iter()
        .map(|c| c.iter().map(|x| x.form().clone()).collect())
        .collect();
    let lines: Vec<[HomoPoly; 2]> =
        net.pencils.iter().map(|p| p.basis().clone()).collect();
    // condition 1: classes pairwise disjoint as point sets
    let mut seen = BTreeSet::new();
    for class in &point_classes {
        for p in class {
            if !seen.insert(p.clone()) {
                return Err(Error::NetViolation("P5 model: repeated point".into()));
            }
        }
    }
    let on_line = |line: &[HomoPoly; 2], p: &HomoPoly| -> bool {
        let rows =
            vec![line[0].coeffs().to_vec(), line[1].coeffs().to_vec(), p.coeffs().to_vec()];
        int_rank(rows, 6) == 2
    };
    // condition 2: the line through any cross-class point pair is listed
    for i in 0..point_classes.len() {
        for j in i + 1..point_classes.len() {
            for a in &point_classes[i] {
                for b in &point_classes[j] {
                    if !lines.iter().any(|l| on_line(l, a) && on_line(l, b)) {
                        return Err(Error::NetViolation(
                            "P5 model: a cross-class chord is not a listed line".into(),
                        ));
                    }
                }
            }
        }
    }
    // condition 3: every line carries exactly one point of each class
    for l in &lines {
        for (ci, class) in point_classes.iter().enumerate() {
            let n = class.iter().filter(|p| on_line(l, p)).count();
            if n != 1 {
                return Err(Error::NetViolation(format!(
                    "P5 model: a line carries {n} points of class {ci}"
                )));
            }
        }
    }
    Ok(P5Model { point_classes, lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{dualize_line, dualize_point};

    #[test]
    fn line_net_is_valid_and_fails_when_a_line_is_dropped() {
        let s = HexScene::generate(4);
        let net = build_line_net(&s).unwrap();
        assert_eq!(net.points.len(), 16);
        assert!(validate_line_net(&net).is_ok());

        let mut broken = net.clone();
        broken.classes[2].pop();
        assert!(matches!(validate_line_net(&broken), Err(Error::NetViolation(_))));
    }

    #[test]
    fn line_net_dualizes_to_a_point_net() {
        let s = HexScene::generate(7);
        let net = build_line_net(&s).unwrap();
        // dual picture: classes of points, net points become lines; every
        // dual line passes through exactly one dual point of each class
        let dual_classes: Vec<Vec<HPoint>> = net
            .classes
            .iter()
            .map(|c| c.iter().map(dualize_line).collect())
            .collect();
        let dual_lines: Vec<HLine> = net.points.iter().map(dualize_point).collect();
        assert_eq!(dual_lines.len(), 16);
        for l in &dual_lines {
            for class in &dual_classes {
                assert_eq!(class.iter().filter(|p| p.on_line(l)).count(), 1);
            }
        }
    }

    #[test]
    fn two_arbitrary_disjoint_classes_form_a_2_net() {
        let a = Conic::from_i64(&[1, 0, 0, 1, 0, -1]).unwrap();
        let b = Conic::from_i64(&[1, 0, 0, 1, 0, -4]).unwrap();
        let c = Conic::from_i64(&[2, 1, 0, 1, 0, -3]).unwrap();
        let d = Conic::from_i64(&[1, 0, 1, 3, 0, -2]).unwrap();
        let (_, report) = validate_conic_net(&[vec![a, b], vec![c, d]]);
        assert!(report.disjoint_classes && report.cross_pairs_in_set && report.one_per_class);
        assert!(report.common_degree.is_none());
    }

    #[test]
    fn duplicated_conic_fails_condition_1() {
        let a = Conic::from_i64(&[1, 0, 0, 1, 0, -1]).unwrap();
        let c = Conic::from_i64(&[2, 1, 0, 1, 0, -3]).unwrap();
        let (_, report) = validate_conic_net(&[vec![a.clone(), a], vec![c]]);
        assert!(!report.disjoint_classes);
        assert!(!report.is_valid());
    }

    #[test]
    fn example_net_is_a_valid_3_3_net() {
        let s = OctScene::generate(2);
        let (net, report) = example_conic_net(&s).unwrap();
        assert!(report.is_valid(), "report: {report:?}");
        assert_eq!(report.common_degree, Some(3));
        assert_eq!(report.pencil_count, 9);
        let p5 = net_as_p5(&net).unwrap();
        assert_eq!(p5.lines.len(), 9);
        assert_eq!(p5.point_classes.len(), 3);
    }
}
