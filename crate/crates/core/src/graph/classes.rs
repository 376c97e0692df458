use std::collections::BTreeMap;

use serde::Serialize;

use super::Graph;

/// Vertices grouped by degree, plus the low-degree set `Small`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeClasses {
    /// `classes[i]` is `D_i`; absent keys are empty classes.
    pub classes: BTreeMap<usize, Vec<usize>>,
    pub small_threshold: usize,
    /// `D_{<= small_threshold}`.
    pub small: Vec<usize>,
}

impl DegreeClasses {
    pub fn class(&self, degree: usize) -> &[usize] {
        self.classes.get(&degree).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, degree: usize) -> usize {
        self.class(degree).len()
    }

    /// `D_{<= i}` in increasing vertex order.
    pub fn at_most(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .classes
            .range(..=i)
            .flat_map(|(_, vs)| vs.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// The default `Small` threshold `floor(ln n / 10)`.
pub fn default_small_threshold(n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    ((n as f64).ln() / 10.0).floor() as usize
}

pub fn degree_classes(g: &Graph, small_threshold: usize) -> DegreeClasses {
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in g.vertices() {
        classes.entry(g.degree(v)).or_default().push(v);
    }
    let small = g
        .vertices()
        .filter(|&v| g.degree(v) <= small_threshold)
        .collect();
    DegreeClasses {
        classes,
        small_threshold,
        small,
    }
}
