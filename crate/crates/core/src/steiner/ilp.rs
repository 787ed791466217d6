//! Plain-text rendering of the multicommodity-flow Steiner model.
//!
//! Grammar, one statement per line:
//!
//! ```text
//! // comment
//! min: <coef> <var> +<coef> <var> ...;
//! c<i>: <signed terms> <= | = <rhs>;
//! bin <var>;
//! ```
//!
//! `Y_i_j` (`i < j`) selects the undirected link `{i, j}`; `X_i_j_k`
//! carries commodity `k` over the directed link `i -> j`.

use std::fmt::Write as _;

use super::SteinerInstance;
use crate::format::sig9;
use crate::topology::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `Y_ij <= E_ij`
    Availability,
    /// `X_ijk <= Y_ij`
    Forward,
    /// `X_jik <= Y_ij`
    Backward,
    /// Net outflow of the source is 1 for each commodity.
    Source,
    /// Net outflow of each destination is -1 for its own commodity.
    Destination,
    /// Net outflow of every other node is 0.
    Transit,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Availability,
        Family::Forward,
        Family::Backward,
        Family::Source,
        Family::Destination,
        Family::Transit,
    ];

    fn header(self) -> &'static str {
        match self {
            Family::Availability => "link availability: Y_i_j <= E_i_j",
            Family::Forward => "flow uses a selected link: X_i_j_k <= Y_i_j",
            Family::Backward => "reverse flow uses a selected link: X_j_i_k <= Y_i_j",
            Family::Source => "source emits one unit of every commodity",
            Family::Destination => "destination k absorbs commodity k",
            Family::Transit => "flow conservation at every other node",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub family: Family,
    pub terms: Vec<(f64, String)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlpModel {
    pub objective: Vec<(f64, String)>,
    pub constraints: Vec<Constraint>,
    pub variables: Vec<String>,
    pub text: String,
}

impl IlpModel {
    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn family_count(&self, family: Family) -> usize {
        self.constraints
            .iter()
            .filter(|c| c.family == family)
            .count()
    }
}

fn y(a: NodeId, b: NodeId) -> String {
    format!("Y_{}_{}", a.min(b), a.max(b))
}

fn x(i: NodeId, j: NodeId, k: NodeId) -> String {
    format!("X_{i}_{j}_{k}")
}

fn render_terms(terms: &[(f64, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(c, v)| match *c {
            1.0 => format!("+{v}"),
            -1.0 => format!("-{v}"),
            c if c < 0.0 => format!("{} {v}", sig9(c)),
            c => format!("+{} {v}", sig9(c)),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Builds the model for `instance`. Objective coefficients are the smaller
/// of the two link orientations in the instance weighting.
pub fn emit_ilp(instance: &SteinerInstance<'_>) -> IlpModel {
    let w = instance.weights;
    let n = w.node_count();
    let links = w.undirected_links();
    let dests = instance.terminals;
    let src = instance.source;

    let objective: Vec<_> = links
        .iter()
        .map(|&(a, b)| (w.undirected(a, b).expect("listed link"), y(a, b)))
        .collect();

    let mut constraints = Vec::new();
    for &(a, b) in &links {
        constraints.push(Constraint {
            family: Family::Availability,
            terms: vec![(1.0, y(a, b))],
            sense: Sense::Le,
            rhs: 1.0,
        });
    }
    for (family, forward) in [(Family::Forward, true), (Family::Backward, false)] {
        for &k in dests {
            for &(a, b) in &links {
                let flow = if forward { x(a, b, k) } else { x(b, a, k) };
                constraints.push(Constraint {
                    family,
                    terms: vec![(1.0, flow), (-1.0, y(a, b))],
                    sense: Sense::Le,
                    rhs: 0.0,
                });
            }
        }
    }
    let mut adjacent: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &(a, b) in &links {
        adjacent[a.idx()].push(b);
        adjacent[b.idx()].push(a);
    }
    let balance = |v: NodeId, k: NodeId| -> Vec<(f64, String)> {
        let mut t: Vec<_> = adjacent[v.idx()]
            .iter()
            .map(|&u| (1.0, x(v, u, k)))
            .collect();
        t.extend(adjacent[v.idx()].iter().map(|&u| (-1.0, x(u, v, k))));
        t
    };
    for (family, rhs) in [(Family::Source, 1.0), (Family::Destination, -1.0)] {
        for &k in dests {
            let v = if family == Family::Source { src } else { k };
            constraints.push(Constraint {
                family,
                terms: balance(v, k),
                sense: Sense::Eq,
                rhs,
            });
        }
    }
    for &k in dests {
        for v in (0..n).map(NodeId).filter(|&v| v != src && v != k) {
            constraints.push(Constraint {
                family: Family::Transit,
                terms: balance(v, k),
                sense: Sense::Eq,
                rhs: 0.0,
            });
        }
    }

    let mut variables: Vec<String> = links.iter().map(|&(a, b)| y(a, b)).collect();
    for &k in dests {
        for &(a, b) in &links {
            variables.push(x(a, b, k));
            variables.push(x(b, a, k));
        }
    }

    let mut text = String::new();
    let _ = writeln!(text, "// minimize total weight of selected links");
    let _ = writeln!(text, "min: {};", render_terms(&objective));
    let mut last = None;
    for (i, c) in constraints.iter().enumerate() {
        if last != Some(c.family) {
            let _ = writeln!(text, "// {}", c.family.header());
            last = Some(c.family);
        }
        let op = match c.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
        };
        let _ = writeln!(
            text,
            "c{}: {} {op} {};",
            i + 1,
            render_terms(&c.terms),
            sig9(c.rhs)
        );
    }
    let _ = writeln!(text, "// binary variables");
    for v in &variables {
        let _ = writeln!(text, "bin {v};");
    }

    IlpModel {
        objective,
        constraints,
        variables,
        text,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steiner::{exact_steiner, tree_cost, EdgeWeights, WeightKind};
    use std::collections::BTreeMap;

    fn n(i: usize) -> NodeId {
        NodeId(i)
    }

    fn satisfied(model: &IlpModel, values: &BTreeMap<String, f64>) -> bool {
        model.constraints.iter().all(|c| {
            let lhs: f64 = c
                .terms
                .iter()
                .map(|(k, v)| k * values.get(v).copied().unwrap_or(0.0))
                .sum();
            match c.sense {
                Sense::Le => lhs <= c.rhs + 1e-9,
                Sense::Eq => (lhs - c.rhs).abs() <= 1e-9,
            }
        })
    }

    #[test]
    fn smallest_instance_by_hand() {
        let w = EdgeWeights::from_undirected(2, WeightKind::Delay, [(n(0), n(1), 2.5)]).unwrap();
        let d = [n(1)];
        let m = emit_ilp(&SteinerInstance::new(n(0), &d, &w).unwrap());
        assert_eq!(m.variable_count(), 3);
        for f in &Family::ALL[..5] {
            assert_eq!(m.family_count(*f), 1, "{f:?}");
        }
        assert_eq!(m.family_count(Family::Transit), 0);
        let expected = "\
// minimize total weight of selected links
min: +2.5 Y_0_1;
// link availability: Y_i_j <= E_i_j
c1: +Y_0_1 <= 1;
// flow uses a selected link: X_i_j_k <= Y_i_j
c2: +X_0_1_1 -Y_0_1 <= 0;
// reverse flow uses a selected link: X_j_i_k <= Y_i_j
c3: +X_1_0_1 -Y_0_1 <= 0;
// source emits one unit of every commodity
c4: +X_0_1_1 -X_1_0_1 = 1;
// destination k absorbs commodity k
c5: +X_1_0_1 -X_0_1_1 = -1;
// binary variables
bin Y_0_1;
bin X_0_1_1;
bin X_1_0_1;
";
        assert_eq!(m.text, expected);
    }

    #[test]
    fn exact_tree_is_a_feasible_point_at_its_cost() {
        let edges = [
            (n(0), n(1), 1.0),
            (n(1), n(2), 1.0),
            (n(2), n(3), 1.0),
            (n(3), n(0), 1.0),
            (n(4), n(0), 0.6),
            (n(4), n(1), 0.6),
            (n(4), n(2), 0.6),
            (n(4), n(3), 0.6),
        ];
        let w = EdgeWeights::from_undirected(5, WeightKind::Delay, edges).unwrap();
        let d = [n(1), n(2), n(3)];
        let inst = SteinerInstance::new(n(0), &d, &w).unwrap();
        let tree = exact_steiner(&inst).unwrap();
        let m = emit_ilp(&inst);

        let mut values = BTreeMap::new();
        for (p, c) in tree.edges() {
            values.insert(y(p, c), 1.0);
        }
        for &k in &d {
            for hop in tree.path_from_root(k).unwrap().windows(2) {
                values.insert(x(hop[0], hop[1], k), 1.0);
            }
        }
        assert!(satisfied(&m, &values));
        let objective: f64 = m
            .objective
            .iter()
            .map(|(c, v)| c * values.get(v).copied().unwrap_or(0.0))
            .sum();
        assert!((objective - tree_cost(&tree, &w).unwrap()).abs() < 1e-12);
        assert!((objective - 2.4).abs() < 1e-12);

        // Dropping a tree link breaks feasibility.
        let (p, c) = tree.edges()[0];
        values.insert(y(p, c), 0.0);
        assert!(!satisfied(&m, &values));
    }

    #[test]
    fn output_is_byte_stable() {
        let w = EdgeWeights::from_undirected(
            4,
            WeightKind::Delay,
            [
                (n(0), n(1), 1.0),
                (n(1), n(2), 1.25),
                (n(2), n(3), 0.5),
                (n(0), n(3), 3.0),
            ],
        )
        .unwrap();
        let d = [n(2), n(3)];
        let inst = SteinerInstance::new(n(0), &d, &w).unwrap();
        assert_eq!(emit_ilp(&inst).text, emit_ilp(&inst).text);
        let m = emit_ilp(&inst);
        assert_eq!(m.variable_count(), 4 + 2 * 4 * 2);
        assert_eq!(m.family_count(Family::Transit), 2 * (4 - 2));
    }
}
