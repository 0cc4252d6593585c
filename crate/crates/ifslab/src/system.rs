//! Iterated function systems: a validated family of invertible affine
//! contractions on a common ambient space, with optional declared overlap
//! structure for systems whose map images are known to share homothetic
//! copies.

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use serde::Serialize;

/// A declared overlap: the listed maps' images share one homothetic copy of
/// the attractor, scaled by `scale_p`.
#[derive(Debug, Clone, Serialize)]
pub struct OverlapSpec {
    /// Indices (into the system's map list) of the maps whose images share
    /// the overlap copy.
    pub indices: Vec<usize>,
    /// Number of images meeting in the copy; always `indices.len()`.
    pub multiplicity_q: usize,
    /// Similarity ratio of the overlap copy relative to the attractor,
    /// in (0, 1).
    pub scale_p: f64,
}

impl OverlapSpec {
    /// Builds a validated overlap declaration.
    ///
    /// `indices` must be non-empty, strictly increasing (no duplicates), and
    /// `scale_p` must lie in (0, 1). A single-index declaration is accepted
    /// but contributes nothing to dimension equations (multiplicity 1 means
    /// no actual double-counting).
    pub fn new(indices: Vec<usize>, scale_p: f64) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSystem(
                "overlap declaration needs at least one map index".to_string(),
            ));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSystem(
                "overlap indices must be strictly increasing".to_string(),
            ));
        }
        if !(scale_p > 0.0 && scale_p < 1.0) {
            return Err(Error::InvalidSystem(format!(
                "overlap scale must lie in (0, 1), got {scale_p}"
            )));
        }
        let multiplicity_q = indices.len();
        Ok(Self {
            indices,
            multiplicity_q,
            scale_p,
        })
    }
}

/// A validated iterated function system.
#[derive(Debug, Clone)]
pub struct IfsSystem {
    maps: Vec<AffineMap>,
    overlaps: Vec<OverlapSpec>,
    name: String,
}

impl IfsSystem {
    /// Builds a system from its maps. All maps must share one ambient
    /// dimension; at least one map is required.
    pub fn new(maps: Vec<AffineMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidSystem(
                "a system needs at least one map".to_string(),
            ));
        }
        let m = maps[0].dimension();
        for (i, map) in maps.iter().enumerate() {
            if map.dimension() != m {
                return Err(Error::InvalidSystem(format!(
                    "map {i} has dimension {} but map 0 has dimension {m}",
                    map.dimension()
                )));
            }
        }
        Ok(Self {
            maps,
            overlaps: Vec::new(),
            name: String::new(),
        })
    }

    /// Sets a display name.
    #[must_use]
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Attaches declared overlap structure, validating index ranges.
    pub fn with_overlaps(mut self, overlaps: Vec<OverlapSpec>) -> Result<Self> {
        for (j, spec) in overlaps.iter().enumerate() {
            if let Some(&bad) = spec.indices.iter().find(|&&i| i >= self.maps.len()) {
                return Err(Error::InvalidSystem(format!(
                    "overlap {j} references map {bad} but the system has {} maps",
                    self.maps.len()
                )));
            }
        }
        self.overlaps = overlaps;
        Ok(self)
    }

    /// The maps, in declaration order.
    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    /// Declared overlap structure (possibly empty).
    pub fn overlaps(&self) -> &[OverlapSpec] {
        &self.overlaps
    }

    /// Display name (possibly empty).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Ambient dimension shared by all maps.
    pub fn dimension(&self) -> usize {
        self.maps[0].dimension()
    }

    /// Number of maps.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    /// Always false: construction requires at least one map.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Composes the maps named by `word` left-to-right as
    /// `maps[word[0]] ∘ maps[word[1]] ∘ …` (the first index is applied last).
    pub fn compose_word(&self, word: &[usize]) -> Result<AffineMap> {
        if word.is_empty() {
            return Err(Error::InvalidSystem(
                "composition word must be non-empty".to_string(),
            ));
        }
        let mut acc: Option<AffineMap> = None;
        for &i in word.iter().rev() {
            let map = self.maps.get(i).ok_or_else(|| {
                Error::InvalidSystem(format!(
                    "word references map {i} but the system has {} maps",
                    self.maps.len()
                ))
            })?;
            acc = Some(match acc {
                None => map.clone(),
                Some(inner) => AffineMap::compose(map, &inner)?,
            });
        }
        Ok(acc.expect("word checked non-empty"))
    }
}

/// Calls `visit` with every word of length `len` over the alphabet
/// `0..alphabet`, in lexicographic order.
pub fn for_each_word(alphabet: usize, len: usize, mut visit: impl FnMut(&[usize])) {
    assert!(alphabet >= 1 && len >= 1, "word enumeration needs alphabet and length >= 1");
    let mut word = vec![0usize; len];
    loop {
        visit(&word);
        // Increment the word as a base-`alphabet` counter, most significant
        // digit first, so enumeration is lexicographic.
        let mut pos = len;
        while pos > 0 {
            pos -= 1;
            word[pos] += 1;
            if word[pos] < alphabet {
                break;
            }
            word[pos] = 0;
            if pos == 0 {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map2(matrix: [f64; 4], translation: [f64; 2]) -> AffineMap {
        AffineMap::from_parts(&matrix, &translation).unwrap()
    }

    fn quarter_turn_pair() -> IfsSystem {
        let f = map2([0.0, -1.0 / 3.0, 1.0, 0.0], [0.0, 0.0]);
        let g = map2([2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0], [-1.0, 0.0]);
        IfsSystem::new(vec![f, g]).unwrap()
    }

    #[test]
    fn rejects_empty_and_mixed_dimension_systems() {
        assert!(IfsSystem::new(vec![]).is_err());
        let a = map2([0.5, 0.0, 0.0, 0.5], [0.0, 0.0]);
        let b = AffineMap::from_parts(&[0.5], &[0.0]).unwrap();
        assert!(IfsSystem::new(vec![a, b]).is_err());
    }

    #[test]
    fn overlap_validation_rejects_bad_indices_and_scales() {
        assert!(OverlapSpec::new(vec![], 0.5).is_err());
        assert!(OverlapSpec::new(vec![1, 1], 0.5).is_err());
        assert!(OverlapSpec::new(vec![2, 1], 0.5).is_err());
        assert!(OverlapSpec::new(vec![1, 2], 0.0).is_err());
        assert!(OverlapSpec::new(vec![1, 2], 1.0).is_err());
        let spec = OverlapSpec::new(vec![2, 3], 0.25).unwrap();
        assert_eq!(spec.multiplicity_q, 2);
        let sys = quarter_turn_pair();
        assert!(sys.clone().with_overlaps(vec![spec]).is_err(), "index 3 out of range");
        let ok = OverlapSpec::new(vec![0, 1], 0.25).unwrap();
        assert!(sys.with_overlaps(vec![ok]).is_ok());
    }

    #[test]
    fn compose_word_applies_first_index_last() {
        let sys = quarter_turn_pair();
        let fg = sys.compose_word(&[0, 1]).unwrap();
        let x = [0.3, 0.9];
        let expected = sys.maps()[0].apply(&sys.maps()[1].apply(&x));
        let got = fg.apply(&x);
        for (a, b) in expected.iter().zip(&got) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn word_enumeration_is_lexicographic_and_complete() {
        let mut words = Vec::new();
        for_each_word(3, 2, |w| words.push(w.to_vec()));
        assert_eq!(words.len(), 9);
        assert_eq!(words[0], vec![0, 0]);
        assert_eq!(words[1], vec![0, 1]);
        assert_eq!(words[8], vec![2, 2]);
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(words, sorted);
    }
}
