//! Labeled rational instances: the unit of generation, verification and
//! rendering. A scene is a base conic (always x² + y² − z² for generated
//! instances) with labeled vertices on it, produced from a seed by a
//! portable 64-bit linear congruential generator so instances reproduce
//! bit-exactly across platforms and implementations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::projective::{param_point, Conic, HPoint};
use crate::rat::{rat_from_str, rat_to_string, ratio, Rat};

/// Portable LCG: s ← s·6364136223846793005 + 1442695040888963407 (mod 2⁶⁴),
/// with the upper 32 bits of the state used as output.
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        // One warm-up step decorrelates small seeds.
        let mut rng = Lcg64 { state: seed };
        rng.step();
        rng
    }

    fn step(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    pub fn next_u32(&mut self) -> u32 {
        (self.step() >> 32) as u32
    }

    /// Uniform-ish draw in [0, n).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        (self.next_u32() as u64) % n
    }

    /// Integer in [lo, hi] inclusive.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// A small nonzero rational for scene parameters.
    pub fn rat_param(&mut self) -> Rat {
        let num = loop {
            let n = self.int_in(-400, 400);
            if n != 0 {
                break n;
            }
        };
        let den = self.int_in(1, 40);
        ratio(num, den)
    }

    /// Small integer coefficient in [-9, 9], nonzero with probability 18/19.
    pub fn small_coeff(&mut self) -> i64 {
        self.int_in(-9, 9)
    }
}

/// Labeled rational instance: base conic, named vertices, seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scene {
    pub seed: u64,
    pub conic: Conic,
    pub points: BTreeMap<String, HPoint>,
    /// Circle parameters of the labeled points, in label order (kept for
    /// generated scenes; reconstructed as None when loaded from JSON).
    pub params: Option<Vec<Rat>>,
}

pub fn label(i: usize) -> String {
    char::from(b'A' + i as u8).to_string()
}

/// Draws n distinct circle parameters, rejecting antipodal pairs
/// (tᵢ·tⱼ = −1 collapses Pascal lines) and duplicates.
pub fn draw_params(rng: &mut Lcg64, n: usize) -> Vec<Rat> {
    let minus_one = ratio(-1, 1);
    let mut out: Vec<Rat> = Vec::with_capacity(n);
    while out.len() < n {
        let t = rng.rat_param();
        if out.iter().any(|u| *u == t || u * &t == minus_one) {
            continue;
        }
        out.push(t);
    }
    out
}

impl Scene {
    /// Inscribed 2n-gon scene with labels A, B, … on the unit circle.
    pub fn inscribed(seed: u64, n_points: usize) -> Scene {
        assert!(n_points <= 26);
        let mut rng = Lcg64::new(seed);
        let ts = draw_params(&mut rng, n_points);
        let points = ts
            .iter()
            .enumerate()
            .map(|(i, t)| (label(i), param_point(Some(t))))
            .collect();
        Scene { seed, conic: Conic::unit_circle(), points, params: Some(ts) }
    }

    pub fn hexagon(seed: u64) -> Scene {
        Scene::inscribed(seed, 6)
    }

    pub fn octagon(seed: u64) -> Scene {
        Scene::inscribed(seed, 8)
    }

    pub fn point(&self, lbl: &str) -> Result<&HPoint> {
        self.points
            .get(lbl)
            .ok_or_else(|| Error::InvalidScene(format!("missing point {lbl}")))
    }

    /// Points in label order.
    pub fn point_vec(&self) -> Vec<HPoint> {
        self.points.values().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// A deterministic RNG derived from the scene seed and a stream tag, so
    /// different verifiers draw independent but reproducible auxiliary data.
    pub fn rng(&self, stream: u64) -> Lcg64 {
        Lcg64::new(self.seed ^ stream.wrapping_mul(0x9E3779B97F4A7C15))
    }

    pub fn to_json(&self) -> String {
        let doc = SceneDoc {
            seed: self.seed,
            conic: self
                .conic
                .form()
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            points: self
                .points
                .iter()
                .map(|(k, p)| (k.clone(), p.coords().iter().map(|c| c.to_string()).collect()))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("scene serialization")
    }

    pub fn from_json(s: &str) -> Result<Scene> {
        let doc: SceneDoc =
            serde_json::from_str(s).map_err(|e| Error::InvalidScene(e.to_string()))?;
        if doc.conic.len() != 6 {
            return Err(Error::InvalidScene("conic must have 6 coefficients".into()));
        }
        let conic_coeffs: Result<Vec<Rat>> = doc.conic.iter().map(|c| rat_from_str(c)).collect();
        let form = crate::poly::HomoPoly::from_rats(2, &conic_coeffs?)
            .ok_or_else(|| Error::InvalidScene("zero conic".into()))?;
        let conic = Conic::from_poly(form)?;
        let mut points = BTreeMap::new();
        for (k, v) in &doc.points {
            if v.len() != 3 {
                return Err(Error::InvalidScene(format!("point {k} must have 3 coordinates")));
            }
            let coords: Result<Vec<Rat>> = v.iter().map(|c| rat_from_str(c)).collect();
            let coords = coords?;
            let p = HPoint::from_rats(&[coords[0].clone(), coords[1].clone(), coords[2].clone()])
                .ok_or_else(|| Error::InvalidScene(format!("point {k} is the zero vector")))?;
            if !conic.contains(&p) {
                return Err(Error::InvalidScene(format!("point {k} is not on the scene conic")));
            }
            points.insert(k.clone(), p);
        }
        Ok(Scene { seed: doc.seed, conic, points, params: None })
    }

    /// SHA-256 of the canonical JSON, for report provenance.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.to_json().as_bytes());
        format!("{:x}", h.finalize())
    }
}

#[derive(Serialize, Deserialize)]
struct SceneDoc {
    seed: u64,
    conic: Vec<String>,
    points: BTreeMap<String, Vec<String>>,
}

/// Serializes a rational vector as "p/q" strings (q omitted when 1).
pub fn rats_to_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_and_valid() {
        let s1 = Scene::hexagon(7);
        let s2 = Scene::hexagon(7);
        assert_eq!(s1, s2);
        assert_eq!(s1.len(), 6);
        for p in s1.points.values() {
            assert!(s1.conic.contains(p));
        }
        let s3 = Scene::hexagon(8);
        assert_ne!(s1.points, s3.points);
    }

    #[test]
    fn json_round_trip() {
        let s = Scene::octagon(42);
        let j = s.to_json();
        let back = Scene::from_json(&j).unwrap();
        assert_eq!(back.seed, s.seed);
        assert_eq!(back.points, s.points);
        assert_eq!(back.to_json(), j);
        assert_eq!(back.hash(), s.hash());
    }

    #[test]
    fn json_rejects_off_conic_points() {
        let bad = r#"{"seed": 1, "conic": ["1","0","0","1","0","-1"], "points": {"A": ["1","1","1"]}}"#;
        assert!(Scene::from_json(bad).is_err());
    }

    #[test]
    fn params_avoid_antipodes() {
        for seed in 0..20 {
            let mut rng = Lcg64::new(seed);
            let ts = draw_params(&mut rng, 8);
            for i in 0..8 {
                for j in i + 1..8 {
                    assert_ne!(ts[i], ts[j]);
                    assert_ne!(&ts[i] * &ts[j], ratio(-1, 1));
                }
            }
        }
    }
}
