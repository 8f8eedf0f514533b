//! Weighted argumentation frameworks, attack topology and preference orderings.
//!
//! Every module shares one indexing convention: argument `i` is the `i`-th
//! entry of the declared argument list, and all degree and weight vectors are
//! aligned with it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Arguments and the attack relation, without weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    // attackers[i] = sorted indices j with (a_j, a_i) in the attack relation
    attackers: Vec<Vec<usize>>,
}

impl Topology {
    /// Builds a topology. Repeated attacks collapse into one edge.
    pub fn new<S, A, B>(arguments: &[S], attacks: &[(A, B)]) -> Result<Self>
    where
        S: AsRef<str>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut ids = Vec::with_capacity(arguments.len());
        let mut index = BTreeMap::new();
        for (i, id) in arguments.iter().enumerate() {
            let id = id.as_ref();
            if index.insert(id.to_string(), i).is_some() {
                return Err(Error::DuplicateArgument(id.to_string()));
            }
            ids.push(id.to_string());
        }
        let mut sets = alloc::vec![BTreeSet::new(); ids.len()];
        for (from, to) in attacks {
            let from = lookup(&index, from.as_ref())?;
            let to = lookup(&index, to.as_ref())?;
            sets[to].insert(from);
        }
        let attackers = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(Self { ids, index, attackers })
    }

    /// Builds a topology over `n` arguments named `a0..a{n-1}` from index pairs
    /// `(attacker, target)`.
    pub fn from_indices(n: usize, attacks: &[(usize, usize)]) -> Result<Self> {
        let ids: Vec<String> = (0..n).map(|i| alloc::format!("a{i}")).collect();
        let mut named = Vec::with_capacity(attacks.len());
        for &(from, to) in attacks {
            for k in [from, to] {
                if k >= n {
                    return Err(Error::UnknownArgument(alloc::format!("a{k}")));
                }
            }
            named.push((ids[from].clone(), ids[to].clone()));
        }
        Self::new(&ids, &named)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        lookup(&self.index, id)
    }

    /// Indices of the attackers of argument `i`, ascending.
    pub fn attackers_of(&self, i: usize) -> &[usize] {
        &self.attackers[i]
    }

    /// `Att(a)` by identifier.
    pub fn attackers(&self, id: &str) -> Result<BTreeSet<String>> {
        let i = self.index_of(id)?;
        Ok(self.attackers[i].iter().map(|&j| self.ids[j].clone()).collect())
    }

    pub fn attacks(&self, attacker: usize, target: usize) -> bool {
        self.attackers[target].binary_search(&attacker).is_ok()
    }

    pub fn is_self_attacking(&self, i: usize) -> bool {
        self.attacks(i, i)
    }

    /// All attacks as `(attacker, target)` index pairs, sorted by target then attacker.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.attackers
            .iter()
            .enumerate()
            .flat_map(|(to, from)| from.iter().map(move |&f| (f, to)))
    }

    pub fn edge_count(&self) -> usize {
        self.attackers.iter().map(Vec::len).sum()
    }

    pub fn attack_matrix(&self) -> AttackMatrix {
        let n = self.len();
        let mut entries = alloc::vec![0u8; n * n];
        for (from, to) in self.edges() {
            entries[to * n + from] = 1;
        }
        AttackMatrix { n, entries }
    }

    pub(crate) fn check_len(&self, found: usize) -> Result<()> {
        if found == self.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.len(),
                found,
            })
        }
    }
}

fn lookup(index: &BTreeMap<String, usize>, id: &str) -> Result<usize> {
    index
        .get(id)
        .copied()
        .ok_or_else(|| Error::UnknownArgument(id.to_string()))
}

/// Adjacency matrix with entry `(i, j) = 1` iff `a_j` attacks `a_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl AttackMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// `A·x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &v)| f64::from(a) * v).sum())
            .collect()
    }
}

/// A topology together with an initial weight in `[0, 1]` per argument.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFramework {
    topology: Topology,
    weights: Vec<f64>,
}

impl WeightedFramework {
    pub fn new(topology: Topology, weights: Vec<f64>) -> Result<Self> {
        topology.check_len(weights.len())?;
        for (i, &w) in weights.iter().enumerate() {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::WeightOutOfRange {
                    id: topology.id(i).to_string(),
                    value: w,
                });
            }
        }
        Ok(Self { topology, weights })
    }

    /// Validates and assembles a framework from raw parts.
    pub fn build<S, A, B>(arguments: &[S], attacks: &[(A, B)], weights: &[f64]) -> Result<Self>
    where
        S: AsRef<str>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        Self::new(Topology::new(arguments, attacks)?, weights.to_vec())
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        Self::new(self.topology.clone(), weights)
    }
}

/// Acceptability degrees, index-aligned with a topology.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeVector(Vec<f64>);

impl DegreeVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::DegreeOutOfRange { index, value });
            }
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(alloc::vec![0.0; n])
    }

    // Fixed-point iterates are in [0, 1] by construction.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl core::ops::Index<usize> for DegreeVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A ranked list of equivalence classes, most preferred first.
///
/// Text form: `a0 > a1 = a3 > a2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingPartition {
    classes: Vec<BTreeSet<String>>,
}

impl OrderingPartition {
    /// Builds a partition from classes; rejects empty classes and repeated ids.
    pub fn new<I, C, S>(classes: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for class in classes {
            let mut set = BTreeSet::new();
            for id in class {
                let id = id.into();
                if !seen.insert(id.clone()) {
                    return Err(Error::DuplicateArgument(id));
                }
                set.insert(id);
            }
            if set.is_empty() {
                return Err(Error::InvalidConfig("ordering classes must be non-empty"));
            }
            out.push(set);
        }
        if out.is_empty() {
            return Err(Error::InvalidConfig("ordering must have at least one class"));
        }
        Ok(Self { classes: out })
    }

    pub fn classes(&self) -> &[BTreeSet<String>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Checks that the partition covers exactly the topology's arguments and
    /// returns, for every argument index, the index of its class.
    pub fn class_of_each(&self, topology: &Topology) -> Result<Vec<usize>> {
        let mut rank = alloc::vec![usize::MAX; topology.len()];
        for (k, class) in self.classes.iter().enumerate() {
            for id in class {
                rank[topology.index_of(id)?] = k;
            }
        }
        if let Some(i) = rank.iter().position(|&r| r == usize::MAX) {
            return Err(Error::MissingArgument(topology.id(i).to_string()));
        }
        Ok(rank)
    }

    /// Parses and validates against a topology in one step.
    pub fn parse_for(text: &str, topology: &Topology) -> Result<Self> {
        let partition: Self = text.parse()?;
        partition.class_of_each(topology)?;
        Ok(partition)
    }
}

impl FromStr for OrderingPartition {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut classes = Vec::new();
        let mut offset = 0;
        for class_text in text.split('>') {
            let mut class = Vec::new();
            let mut inner = offset;
            for id_text in class_text.split('=') {
                let id = id_text.trim();
                if id.is_empty() || id.contains(char::is_whitespace) {
                    return Err(Error::OrderingSyntax {
                        position: inner,
                        message: if id.is_empty() {
                            "expected an argument identifier".to_string()
                        } else {
                            alloc::format!("identifier `{id}` contains whitespace")
                        },
                    });
                }
                class.push(id.to_string());
                inner += id_text.len() + 1;
            }
            classes.push(class);
            offset += class_text.len() + 1;
        }
        Self::new(classes)
    }
}

impl fmt::Display for OrderingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, class) in self.classes.iter().enumerate() {
            if k > 0 {
                f.write_str(" > ")?;
            }
            for (m, id) in class.iter().enumerate() {
                if m > 0 {
                    f.write_str(" = ")?;
                }
                f.write_str(id)?;
            }
        }
        Ok(())
    }
}

/// Groups arguments whose degrees lie within `tie_tolerance` of a neighbour in
/// degree-sorted order, then lists the groups by descending degree.
pub fn ordering_from_degrees(
    topology: &Topology,
    degrees: &DegreeVector,
    tie_tolerance: f64,
) -> Result<OrderingPartition> {
    topology.check_len(degrees.len())?;
    if tie_tolerance.is_nan() || tie_tolerance < 0.0 {
        return Err(Error::InvalidConfig("tie tolerance must be non-negative"));
    }
    let x = degrees.as_slice();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));

    let mut classes: Vec<Vec<&str>> = Vec::new();
    let mut prev = f64::NAN;
    for &i in &order {
        match classes.last_mut() {
            Some(class) if prev - x[i] <= tie_tolerance => class.push(topology.id(i)),
            _ => classes.push(alloc::vec![topology.id(i)]),
        }
        prev = x[i];
    }
    OrderingPartition::new(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::small_framework;
    use alloc::vec;

    fn set(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn builds_small_framework() {
        let f = small_framework();
        assert_eq!(f.len(), 4);
        assert_eq!(f.topology().index_of("a2").unwrap(), 2);
        assert_eq!(f.topology().edge_count(), 5);
    }

    #[test]
    fn single_argument_framework() {
        let f = WeightedFramework::build::<_, &str, &str>(&["a0"], &[], &[1.0]).unwrap();
        assert_eq!(f.weights(), &[1.0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let err = WeightedFramework::build::<_, &str, &str>(&["a0"], &[], &[1.2]).unwrap_err();
        assert!(matches!(err, Error::WeightOutOfRange { .. }));
        let err = Topology::new::<_, &str, &str>(&["a", "a"], &[]).unwrap_err();
        assert_eq!(err, Error::DuplicateArgument("a".into()));
        let err = Topology::new(&["a"], &[("a", "b")]).unwrap_err();
        assert_eq!(err, Error::UnknownArgument("b".into()));
        assert!(WeightedFramework::build::<_, &str, &str>(&["a"], &[], &[f64::NAN]).is_err());
    }

    #[test]
    fn duplicate_attacks_collapse() {
        let t = Topology::new(&["a", "b"], &[("a", "b"), ("a", "b")]).unwrap();
        assert_eq!(t.edge_count(), 1);
    }

    #[test]
    fn attackers_of_small_framework() {
        let t = small_framework().topology().clone();
        assert_eq!(t.attackers("a2").unwrap(), set(&["a0", "a1", "a2", "a3"]));
        assert!(t.attackers("a0").unwrap().is_empty());
        assert_eq!(t.attackers("a1").unwrap(), set(&["a1"]));
        assert!(t.attackers("zz").is_err());
    }

    #[test]
    fn attack_matrix_rows() {
        let m = small_framework().topology().attack_matrix();
        assert_eq!(m.row(2), &[1, 1, 1, 1]);
        assert_eq!(m.row(0), &[0, 0, 0, 0]);
        assert_eq!(m.row(1), &[0, 1, 0, 0]);

        let empty = Topology::from_indices(3, &[]).unwrap().attack_matrix();
        assert!((0..3).all(|i| empty.row(i).iter().all(|&v| v == 0)));

        let selfish = Topology::from_indices(1, &[(0, 0)]).unwrap().attack_matrix();
        assert_eq!(selfish.get(0, 0), 1);
    }

    #[test]
    fn ordering_from_known_degrees() {
        let t = small_framework().topology().clone();
        let hc = DegreeVector::new(vec![0.43, 0.30, 0.38, 0.30]).unwrap();
        let p = ordering_from_degrees(&t, &hc, 1e-9).unwrap();
        assert_eq!(
            p,
            OrderingPartition::new([vec!["a0"], vec!["a2"], vec!["a1", "a3"]]).unwrap()
        );

        let cb = DegreeVector::new(vec![0.43, 0.18, 0.17, 0.30]).unwrap();
        let p = ordering_from_degrees(&t, &cb, 1e-9).unwrap();
        assert_eq!(p.to_string(), "a0 > a3 > a1 > a2");

        let flat = DegreeVector::new(vec![0.2; 4]).unwrap();
        assert_eq!(ordering_from_degrees(&t, &flat, 0.0).unwrap().len(), 1);
    }

    #[test]
    fn tie_tolerance_is_transitive() {
        let t = Topology::from_indices(3, &[]).unwrap();
        let x = DegreeVector::new(vec![0.5, 0.5 + 0.8e-3, 0.5 + 1.6e-3]).unwrap();
        assert_eq!(ordering_from_degrees(&t, &x, 1e-3).unwrap().len(), 1);
        assert_eq!(ordering_from_degrees(&t, &x, 1e-4).unwrap().len(), 3);
    }

    #[test]
    fn parses_orderings() {
        let p: OrderingPartition = "a0 > a1 = a3 > a2".parse().unwrap();
        assert_eq!(
            p,
            OrderingPartition::new([vec!["a0"], vec!["a1", "a3"], vec!["a2"]]).unwrap()
        );

        let one = Topology::from_indices(1, &[]).unwrap();
        assert_eq!(OrderingPartition::parse_for("a0", &one).unwrap().len(), 1);

        assert_eq!(
            "a0 > a0".parse::<OrderingPartition>().unwrap_err(),
            Error::DuplicateArgument("a0".into())
        );
        assert!(matches!(
            "a0 > > a1".parse::<OrderingPartition>().unwrap_err(),
            Error::OrderingSyntax { position: 4, .. }
        ));
        assert!("".parse::<OrderingPartition>().is_err());
        assert!("a b".parse::<OrderingPartition>().is_err());

        let t = small_framework().topology().clone();
        assert_eq!(
            OrderingPartition::parse_for("a0 > a1 > a2", &t).unwrap_err(),
            Error::MissingArgument("a3".into())
        );
        assert_eq!(
            OrderingPartition::parse_for("a0 > a1 = a3 > a9", &t).unwrap_err(),
            Error::UnknownArgument("a9".into())
        );
    }

    #[test]
    fn degree_vector_range() {
        assert!(DegreeVector::new(vec![0.0, 1.0]).is_ok());
        assert!(DegreeVector::new(vec![-0.1]).is_err());
    }
}
