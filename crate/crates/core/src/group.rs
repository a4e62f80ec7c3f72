use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A finitely generated permutation group. The generator list is never empty;
/// the trivial group is generated by the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupFile", into = "GroupFile")]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    label: String,
}

/// On-disk form of a group: `{ "degree", "generators", "label" }`, 0-based images.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    #[serde(default)]
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_labels: Option<Vec<String>>,
}

impl PermGroup {
    pub fn new(generators: Vec<Permutation>) -> Result<Self> {
        let degree = generators.first().ok_or(Error::NoGenerators)?.degree();
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            label: String::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: vec![Permutation::identity(degree)],
            label: "1".into(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Orbit of `point`, sorted ascending.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        self.check_point(point)?;
        let mut seen = vec![false; self.degree];
        let mut out = self.orbit_into(point, &mut seen);
        out.sort_unstable();
        Ok(out)
    }

    fn orbit_into(&self, point: usize, seen: &mut [bool]) -> Vec<usize> {
        let mut out = vec![point];
        seen[point] = true;
        let mut queue = VecDeque::from([point]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out
    }

    /// All orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let mut o = self.orbit_into(x, &mut seen);
                o.sort_unstable();
                out.push(o);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    pub(crate) fn check_point(&self, point: usize) -> Result<()> {
        if point >= self.degree {
            Err(Error::PointOutOfRange {
                point,
                degree: self.degree,
            })
        } else {
            Ok(())
        }
    }

    pub fn symmetric(m: usize) -> Self {
        let gens = if m <= 1 {
            vec![Permutation::identity(m.max(1))]
        } else {
            let cycle: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
            vec![
                Permutation::from_cycles(m, &[vec![0, 1]]).unwrap(),
                Permutation::from_images(&cycle).unwrap(),
            ]
        };
        PermGroup::new(gens).unwrap().with_label(format!("S{m}"))
    }

    /// `A_m` generated by a 3-cycle and an `m`- or `(m-1)`-cycle of even parity.
    pub fn alternating(m: usize) -> Self {
        let gens = if m < 3 {
            vec![Permutation::identity(m.max(1))]
        } else if m % 2 == 1 {
            vec![
                Permutation::from_cycles(m, &[(0..m).collect()]).unwrap(),
                Permutation::from_cycles(m, &[vec![0, 1, 2]]).unwrap(),
            ]
        } else {
            vec![
                Permutation::from_cycles(m, &[(1..m).collect()]).unwrap(),
                Permutation::from_cycles(m, &[vec![0, 1, 2]]).unwrap(),
            ]
        };
        PermGroup::new(gens).unwrap().with_label(format!("A{m}"))
    }

    /// The regular cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        PermGroup::new(vec![Permutation::from_images(&cycle).unwrap()])
            .unwrap()
            .with_label(format!("C{n}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("group serializes")
    }

    pub fn load(path: &Path) -> std::io::Result<GroupFile> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}

impl TryFrom<GroupFile> for PermGroup {
    type Error = Error;

    fn try_from(file: GroupFile) -> Result<Self> {
        let group = PermGroup::new(file.generators)?.with_label(file.label);
        if group.degree != file.degree {
            return Err(Error::DegreeMismatch {
                left: file.degree,
                right: group.degree,
            });
        }
        if let Some(labels) = &file.point_labels {
            if labels.len() != group.degree {
                return Err(Error::InvalidArgument(format!(
                    "{} point labels for degree {}",
                    labels.len(),
                    group.degree
                )));
            }
        }
        Ok(group)
    }
}

impl From<PermGroup> for GroupFile {
    fn from(g: PermGroup) -> GroupFile {
        GroupFile {
            degree: g.degree,
            generators: g.generators,
            label: g.label,
            point_labels: None,
        }
    }
}

impl GroupFile {
    pub fn group(&self) -> Result<PermGroup> {
        PermGroup::try_from(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbits_of_small_groups() {
        let a7 = PermGroup::alternating(7);
        assert_eq!(a7.orbit(0).unwrap(), (0..7).collect::<Vec<_>>());
        let g = PermGroup::new(vec![Permutation::parse_cycles(4, "(0 1)(2 3)").unwrap()]).unwrap();
        assert_eq!(g.orbit(0).unwrap(), vec![0, 1]);
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2, 3]]);
        let c6 = PermGroup::cyclic(6);
        for x in 0..6 {
            assert_eq!(c6.orbit(x).unwrap().len(), 6);
        }
        assert!(matches!(c6.orbit(6), Err(Error::PointOutOfRange { .. })));
    }

    #[test]
    fn transitivity() {
        let g = PermGroup::new(vec![Permutation::parse_cycles(4, "(0 1)").unwrap()]).unwrap();
        assert!(!g.is_transitive());
        assert!(PermGroup::trivial(1).is_transitive());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let g = PermGroup::alternating(5);
        let text = g.to_json();
        assert!(text.contains("\"degree\":5"));
        let back: PermGroup = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"degree": 4, "generators": [[1,0,2]], "label": ""}"#;
        assert!(serde_json::from_str::<PermGroup>(bad).is_err());
        let empty = r#"{"degree": 4, "generators": [], "label": ""}"#;
        assert!(serde_json::from_str::<PermGroup>(empty).is_err());
    }

    #[test]
    fn mixed_degrees_rejected() {
        let r = PermGroup::new(vec![Permutation::identity(3), Permutation::identity(4)]);
        assert!(matches!(r, Err(Error::DegreeMismatch { .. })));
    }
}
