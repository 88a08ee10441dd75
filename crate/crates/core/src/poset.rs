//! Finite ranked posets of layers: Möbius values on the intervals above
//! each minimal element, cover relations, characteristic sums over
//! subposets, Hasse diagram export and grouping of isomorphic components.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};

use num_traits::{One, Signed, Zero};
use petgraph::algo::is_isomorphic;
use petgraph::graph::DiGraph;

use crate::arrangement::SubsetMask;
use crate::error::{Error, Result};
use crate::{Int, Poly};

/// Canonical identifier of a layer.
pub trait LayerKey: Clone + Ord + std::hash::Hash + fmt::Debug + Send + Sync {
    /// Short human-readable description, used in Hasse diagram labels.
    fn describe(&self) -> String;
}

/// Layer data supplied by an enumerator before the order is known.
#[derive(Clone, Debug)]
pub struct LayerSeed<K> {
    pub key: K,
    pub dim: usize,
    pub rank: usize,
    pub localization: SubsetMask,
    pub generating_subsets: Vec<SubsetMask>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer<K> {
    pub key: K,
    pub dim: usize,
    pub rank: usize,
    /// Index of the unique minimal layer below this one.
    pub component: usize,
    /// Elements of `A` whose hyperplane contains the layer.
    pub localization: SubsetMask,
    /// `R(C)`: subsets of the localization of full local rank.
    pub generating_subsets: Vec<SubsetMask>,
    /// `μ(T^C, C)`
    pub mobius: Int,
}

/// A layer poset ordered by reverse inclusion; layers are sorted by
/// `(rank, key)`, so indices are stable for a fixed input.
#[derive(Clone, Debug)]
pub struct LayerPoset<K> {
    layers: Vec<Layer<K>>,
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
    covers: Vec<Vec<usize>>,
}

/// One row of a poset dump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerRecord {
    pub index: usize,
    pub key: String,
    pub dim: usize,
    pub rank: usize,
    pub mobius: Int,
    pub component: usize,
    /// Indices of the layers this one covers.
    pub covers: Vec<usize>,
}

/// Isomorphism class of component Hasse diagrams with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentShape {
    pub name: String,
    pub nodes: usize,
    pub edges: usize,
    pub count: usize,
    /// Index of the minimal layer of the first component in the class.
    pub representative: usize,
}

impl<K: LayerKey> LayerPoset<K> {
    /// Builds the poset from deduplicated layers.
    ///
    /// `group` partitions layers by minimal element; `leq(d, c)` is only
    /// asked for pairs inside one group with `rank(d) < rank(c)`.
    pub fn build<G: Ord + Clone>(
        mut seeds: Vec<LayerSeed<K>>,
        group: impl Fn(&K) -> G,
        leq: impl Fn(&K, &K) -> bool,
    ) -> Result<Self> {
        seeds.sort_by(|a, b| (a.rank, &a.key).cmp(&(b.rank, &b.key)));
        if seeds.windows(2).any(|w| w[0].key == w[1].key) {
            return Err(Error::InvariantViolation("duplicate layer key".into()));
        }
        let n = seeds.len();
        let mut groups: BTreeMap<G, Vec<usize>> = BTreeMap::new();
        for (i, s) in seeds.iter().enumerate() {
            groups.entry(group(&s.key)).or_default().push(i);
        }
        let mut below = vec![Vec::new(); n];
        for members in groups.values() {
            for (a, &c) in members.iter().enumerate() {
                for &d in &members[..a] {
                    // Smaller layers lie on fewer hyperplanes.
                    if seeds[d].rank < seeds[c].rank
                        && seeds[d].localization.is_subset_of(seeds[c].localization)
                        && leq(&seeds[d].key, &seeds[c].key)
                    {
                        below[c].push(d);
                    }
                }
            }
        }
        let mut above = vec![Vec::new(); n];
        for (c, ds) in below.iter().enumerate() {
            for &d in ds {
                above[d].push(c);
            }
        }
        let mut component = vec![0; n];
        for c in 0..n {
            let minimal: Vec<usize> =
                std::iter::once(c).chain(below[c].iter().copied()).filter(|&d| below[d].is_empty()).collect();
            match minimal.as_slice() {
                [m] => component[c] = *m,
                _ => {
                    return Err(Error::InvariantViolation(format!(
                        "layer {:?} lies above {} minimal layers",
                        seeds[c].key,
                        minimal.len()
                    )))
                }
            }
        }
        let covers = (0..n)
            .map(|c| {
                let lower: HashSet<usize> = below[c].iter().copied().collect();
                below[c].iter().copied().filter(|&d| !above[d].iter().any(|e| lower.contains(e))).collect()
            })
            .collect();
        let mut layers: Vec<Layer<K>> = seeds
            .into_iter()
            .zip(component)
            .map(|(s, component)| Layer {
                key: s.key,
                dim: s.dim,
                rank: s.rank,
                component,
                localization: s.localization,
                generating_subsets: s.generating_subsets,
                mobius: Int::zero(),
            })
            .collect();
        // Sorted by rank, so every strict lower set is already finished.
        for c in 0..n {
            let mu = if below[c].is_empty() {
                Int::one()
            } else {
                -below[c].iter().map(|&d| &layers[d].mobius).sum::<Int>()
            };
            layers[c].mobius = mu;
        }
        let poset = Self { layers, below, above, covers };
        poset.check_sign_alternation()?;
        Ok(poset)
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layers(&self) -> &[Layer<K>] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &Layer<K> {
        &self.layers[i]
    }

    pub fn index_of(&self, key: &K) -> Option<usize> {
        self.layers.iter().position(|l| &l.key == key)
    }

    /// Strictly smaller layers, i.e. strictly larger subsets of `T`.
    pub fn strictly_below(&self, c: usize) -> &[usize] {
        &self.below[c]
    }

    pub fn strictly_above(&self, c: usize) -> &[usize] {
        &self.above[c]
    }

    pub fn covers(&self, c: usize) -> &[usize] {
        &self.covers[c]
    }

    pub fn leq(&self, d: usize, c: usize) -> bool {
        d == c || self.below[c].contains(&d)
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.below[i].is_empty()).collect()
    }

    pub fn mobius_values(&self) -> Vec<Int> {
        self.layers.iter().map(|l| l.mobius.clone()).collect()
    }

    /// `(-1)^{rank C} μ(T^C, C) > 0` for every layer.
    pub fn check_sign_alternation(&self) -> Result<()> {
        for l in &self.layers {
            let signed = if l.rank % 2 == 1 { -&l.mobius } else { l.mobius.clone() };
            if !signed.is_positive() {
                return Err(Error::InvariantViolation(format!(
                    "μ = {} at rank {} for layer {:?}",
                    l.mobius, l.rank, l.key
                )));
            }
        }
        Ok(())
    }

    /// `Σ μ(T^C, C) t^{dim C}` over the selected layers.
    pub fn characteristic(&self, subset: &[usize]) -> Poly {
        let mut coeffs: Vec<Int> = Vec::new();
        for &c in subset {
            let l = &self.layers[c];
            if coeffs.len() <= l.dim {
                coeffs.resize(l.dim + 1, Int::zero());
            }
            coeffs[l.dim] += &l.mobius;
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// Downward closed: everything below a member is a member.
    pub fn is_order_ideal(&self, subset: &[usize]) -> bool {
        let set: HashSet<usize> = subset.iter().copied().collect();
        subset.iter().all(|&c| self.below[c].iter().all(|d| set.contains(d)))
    }

    /// Upward closed: everything above a member is a member.
    pub fn is_dual_order_ideal(&self, subset: &[usize]) -> bool {
        let set: HashSet<usize> = subset.iter().copied().collect();
        subset.iter().all(|&c| self.above[c].iter().all(|d| set.contains(d)))
    }

    /// Cover relations inside the subset: `(lower, upper)` pairs.
    ///
    /// A subset that is an order ideal or a dual order ideal inherits the
    /// covers of the whole poset; for other subsets covers are recomputed.
    pub fn subset_covers(&self, subset: &[usize]) -> Vec<(usize, usize)> {
        let set: HashSet<usize> = subset.iter().copied().collect();
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        let mut edges = Vec::new();
        for &c in &sorted {
            let lower: Vec<usize> = self.below[c].iter().copied().filter(|d| set.contains(d)).collect();
            for &d in &lower {
                let skipped = lower.iter().any(|&e| e != d && self.below[e].contains(&d));
                if !skipped {
                    edges.push((d, c));
                }
            }
        }
        edges
    }

    pub fn records(&self) -> Vec<LayerRecord> {
        self.layers
            .iter()
            .enumerate()
            .map(|(i, l)| LayerRecord {
                index: i,
                key: l.key.describe(),
                dim: l.dim,
                rank: l.rank,
                mobius: l.mobius.clone(),
                component: l.component,
                covers: self.covers[i].clone(),
            })
            .collect()
    }

    /// Hasse diagram of the selected layers; only `"dot"` is supported.
    pub fn export_hasse(&self, subset: &[usize], format: &str) -> Result<String> {
        if !format.eq_ignore_ascii_case("dot") {
            return Err(Error::UnknownFormat(format.to_string()));
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        let mut out = String::from("digraph layers {\n  rankdir=BT;\n  node [shape=box];\n");
        for &c in &sorted {
            let l = &self.layers[c];
            let label = format!("{}\\ndim {}, mu {}", l.key.describe(), l.dim, l.mobius);
            let _ = writeln!(out, "  L{c} [label=\"{}\"];", label.replace('"', "'"));
        }
        for (d, c) in self.subset_covers(&sorted) {
            let _ = writeln!(out, "  L{d} -> L{c};");
        }
        out.push_str("}\n");
        Ok(out)
    }

    /// Groups the components of the selected subposet by isomorphism type
    /// of their Hasse diagrams, in order of first appearance.
    pub fn component_shapes(&self, subset: &[usize]) -> Vec<ComponentShape> {
        let mut by_component: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &c in subset {
            by_component.entry(self.layers[c].component).or_default().push(c);
        }
        let mut classes: Vec<(DiGraph<(), ()>, ComponentShape)> = Vec::new();
        for (root, members) in by_component {
            let mut graph = DiGraph::<(), ()>::new();
            let nodes: HashMap<usize, _> = members.iter().map(|&c| (c, graph.add_node(()))).collect();
            for (d, c) in self.subset_covers(&members) {
                graph.add_edge(nodes[&d], nodes[&c], ());
            }
            match classes.iter_mut().find(|(g, _)| is_isomorphic(g, &graph)) {
                Some((_, shape)) => shape.count += 1,
                None => {
                    let shape = ComponentShape {
                        name: shape_name(&graph),
                        nodes: graph.node_count(),
                        edges: graph.edge_count(),
                        count: 1,
                        representative: root,
                    };
                    classes.push((graph, shape));
                }
            }
        }
        classes.into_iter().map(|(_, s)| s).collect()
    }
}

fn shape_name(graph: &DiGraph<(), ()>) -> String {
    use petgraph::Direction::{Incoming, Outgoing};
    let n = graph.node_count();
    let e = graph.edge_count();
    let deg = |v, dir| graph.neighbors_directed(v, dir).count();
    let is_chain = e + 1 == n && graph.node_indices().all(|v| deg(v, Incoming) <= 1 && deg(v, Outgoing) <= 1);
    if n == 1 {
        "point".into()
    } else if is_chain {
        format!("chain of {n}")
    } else if n == 4
        && e == 4
        && graph.node_indices().filter(|&v| deg(v, Incoming) == 0 && deg(v, Outgoing) == 2).count() == 1
        && graph.node_indices().filter(|&v| deg(v, Outgoing) == 0 && deg(v, Incoming) == 2).count() == 1
    {
        "diamond".into()
    } else {
        format!("{n} layers, {e} covers")
    }
}
