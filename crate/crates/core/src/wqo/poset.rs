use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an element of a [`PosetSpec`].
pub type Letter = usize;

/// A finite quasi-order given by named elements and a closed `≤` relation.
///
/// The relation is closed under reflexivity and transitivity on
/// construction; equivalent elements are allowed and reported by
/// [`PosetSpec::classes`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PosetSpec {
    label: String,
    names: Vec<String>,
    le: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    elements: Vec<String>,
    #[serde(default)]
    le: Vec<(String, String)>,
}

impl PosetSpec {
    /// Builds the closure of `pairs` (each `(a, b)` meaning `a ≤ b`).
    pub fn new(label: impl Into<String>, names: Vec<String>, pairs: &[(Letter, Letter)]) -> Result<Self> {
        let n = names.len();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::invalid(format!("duplicate element name {name:?}")));
            }
        }
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::invalid(format!("relation pair ({a}, {b}) out of range")));
            }
            le[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    let via = le[k].clone();
                    for (x, y) in le[i].iter_mut().zip(via) {
                        *x |= y;
                    }
                }
            }
        }
        Ok(PosetSpec {
            label: label.into(),
            names,
            le,
        })
    }

    pub fn from_json(label: impl Into<String>, text: &str) -> Result<Self> {
        let raw: PosetJson =
            serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        let index = |name: &str| {
            raw.elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::invalid(format!("unknown element {name:?} in le")))
        };
        let pairs = raw
            .le
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        PosetSpec::new(label, raw.elements.clone(), &pairs)
    }

    /// Serializes the closed relation (non-reflexive pairs only).
    pub fn to_json(&self) -> String {
        let mut le = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j && self.le[i][j] {
                    le.push((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        serde_json::to_string(&PosetJson {
            elements: self.names.clone(),
            le,
        })
        .expect("poset serializes")
    }

    /// Elements named `a`, `b`, … for small indices.
    pub fn default_names(n: usize) -> Vec<String> {
        (0..n)
            .map(|i| {
                if i < 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("x{i}")
                }
            })
            .collect()
    }

    /// `a < b < c < …`
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        PosetSpec::new(format!("chain{n}"), Self::default_names(n), &pairs).expect("valid chain")
    }

    pub fn antichain(n: usize) -> Self {
        PosetSpec::new(format!("antichain{n}"), Self::default_names(n), &[]).expect("valid antichain")
    }

    /// Discrete order on the given names.
    pub fn discrete(names: Vec<String>) -> Result<Self> {
        PosetSpec::new("discrete", names, &[])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Letter) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn leq(&self, a: Letter, b: Letter) -> bool {
        self.le[a][b]
    }

    pub fn equivalent(&self, a: Letter, b: Letter) -> bool {
        self.le[a][b] && self.le[b][a]
    }

    /// Class id per element; ids are the smallest member index of each class.
    pub fn classes(&self) -> Vec<usize> {
        (0..self.len())
            .map(|i| (0..=i).find(|&j| self.equivalent(i, j)).expect("reflexive"))
            .collect()
    }

    pub fn class_count(&self) -> usize {
        let classes = self.classes();
        classes.iter().enumerate().filter(|&(i, &c)| i == c).count()
    }

    /// No element outside `excluded` lies strictly above `x`.
    pub fn is_maximal_excluding(&self, x: Letter, excluded: &[Letter]) -> bool {
        (0..self.len())
            .filter(|y| !excluded.contains(y))
            .all(|y| !self.leq(x, y) || self.leq(y, x))
    }

    /// Same carrier with extra `≤` pairs added and re-closed.
    pub fn extended(&self, pairs: &[(Letter, Letter)]) -> Result<Self> {
        let mut all = pairs.to_vec();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.le[i][j] {
                    all.push((i, j));
                }
            }
        }
        PosetSpec::new(self.label.clone(), self.names.clone(), &all)
    }

    /// Restriction to the elements not in `excluded`, with indices renumbered.
    pub fn without(&self, excluded: &[Letter]) -> (PosetSpec, Vec<Letter>) {
        let keep: Vec<Letter> = (0..self.len()).filter(|i| !excluded.contains(i)).collect();
        let names = keep.iter().map(|&i| self.names[i].clone()).collect();
        let mut pairs = Vec::new();
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if self.le[i][j] {
                    pairs.push((a, b));
                }
            }
        }
        let spec = PosetSpec::new(format!("{}-sub", self.label), names, &pairs).expect("restriction");
        (spec, keep)
    }
}

impl fmt::Display for PosetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_loader_closes_relation() {
        let p = PosetSpec::from_json("t", r#"{"elements":["a","b","c"],"le":[["a","b"],["b","c"]]}"#)
            .unwrap();
        assert!(p.leq(0, 2));
        assert!(p.leq(1, 1));
        assert!(!p.leq(2, 0));
        let back = PosetSpec::from_json("t", &p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn quasi_orders_are_accepted() {
        let p = PosetSpec::from_json("q", r#"{"elements":["a","b"],"le":[["a","b"],["b","a"]]}"#)
            .unwrap();
        assert!(p.equivalent(0, 1));
        assert_eq!(p.class_count(), 1);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(PosetSpec::from_json("t", r#"{"elements":["a"],"le":[["a","z"]]}"#).is_err());
        assert!(PosetSpec::from_json("t", r#"{"elements":["a","a"]}"#).is_err());
    }

    #[test]
    fn maximality() {
        let c = PosetSpec::chain(3);
        assert!(c.is_maximal_excluding(2, &[]));
        assert!(!c.is_maximal_excluding(1, &[]));
        assert!(c.is_maximal_excluding(1, &[2]));
    }
}
