//! Graph-reachability problems: find a node set containing the initial nodes,
//! closed under edges and avoiding the fail nodes.

use std::collections::BTreeSet;

use crate::logic::{name, Clause, Literal, Term};
use crate::saturation::PVarDecl;
use crate::verify::{FiniteModel, Relation};

use super::{FrontendError, Problem};

/// A directed graph on nodes `1..=nodes` with initial and fail sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphSpec {
    pub nodes: usize,
    pub edges: BTreeSet<(usize, usize)>,
    pub init: BTreeSet<usize>,
    pub fail: BTreeSet<usize>,
}

impl GraphSpec {
    pub fn new(nodes: usize) -> Self {
        GraphSpec { nodes, ..Self::default() }
    }

    fn check_node(&self, i: usize) -> Result<usize, FrontendError> {
        if (1..=self.nodes).contains(&i) {
            Ok(i)
        } else {
            Err(FrontendError::Graph(format!("node {i} is outside 1..{}", self.nodes)))
        }
    }

    /// The constant standing for node `i`.
    pub fn node_constant(i: usize) -> Term {
        Term::cnst(&format!("a{i}"))
    }

    /// Brute-force search over all node subsets for a reachability solution.
    pub fn has_solution(&self) -> bool {
        (0u64..1 << self.nodes).any(|mask| self.is_solution(mask))
    }

    /// `mask` bit `i − 1` stands for node `i`.
    pub fn is_solution(&self, mask: u64) -> bool {
        let has = |i: usize| mask >> (i - 1) & 1 == 1;
        self.init.iter().all(|&i| has(i))
            && self.fail.iter().all(|&i| !has(i))
            && self.edges.iter().all(|&(i, j)| !has(i) || has(j))
    }

    /// The least set containing the initial nodes and closed under edges.
    pub fn reachable(&self) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = self.init.clone();
        let mut frontier: Vec<usize> = out.iter().copied().collect();
        while let Some(i) = frontier.pop() {
            for &(a, b) in &self.edges {
                if a == i && out.insert(b) {
                    frontier.push(b);
                }
            }
        }
        out
    }

    /// The model of the graph theory: node `i` is element `i − 1`.
    pub fn intended_model(&self) -> FiniteModel {
        let mut m = FiniteModel::new(self.nodes);
        for i in 1..=self.nodes {
            m.set_constant(&name(&format!("a{i}")), i - 1);
        }
        let edges = self.edges.iter().map(|&(i, j)| vec![i - 1, j - 1]);
        m.set_predicate(&name("E"), Relation::from_tuples(self.nodes, 2, edges));
        m
    }
}

fn numbers(words: &[&str], line: usize) -> Result<Vec<usize>, FrontendError> {
    words
        .iter()
        .map(|w| w.parse().map_err(|_| FrontendError::Graph(format!("line {line}: `{w}` is not a node number"))))
        .collect()
}

/// Reads `nodes <n>`, `edge <i> <j>`, `init <i…>`, `fail <i…>` lines.
pub fn parse_graph(text: &str) -> Result<GraphSpec, FrontendError> {
    let mut g: Option<GraphSpec> = None;
    let mut pending: Vec<(usize, String, Vec<usize>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let code = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = code.split_whitespace().collect();
        let Some((kw, rest)) = words.split_first() else { continue };
        let args = numbers(rest, line)?;
        match *kw {
            "nodes" => {
                if args.len() != 1 || args[0] == 0 {
                    return Err(FrontendError::Graph(format!("line {line}: `nodes` takes one positive number")));
                }
                if g.is_some() {
                    return Err(FrontendError::Graph(format!("line {line}: `nodes` given twice")));
                }
                g = Some(GraphSpec::new(args[0]));
            }
            "edge" if args.len() != 2 => {
                return Err(FrontendError::Graph(format!("line {line}: `edge` takes two node numbers")));
            }
            "edge" | "init" | "fail" => pending.push((line, kw.to_string(), args)),
            other => return Err(FrontendError::Graph(format!("line {line}: unknown directive `{other}`"))),
        }
    }
    let mut g = g.ok_or_else(|| FrontendError::Graph("missing `nodes` line".into()))?;
    for (line, kw, args) in pending {
        let checked: Result<Vec<usize>, _> = args.iter().map(|&a| g.check_node(a)).collect();
        let args = checked.map_err(|e| FrontendError::Graph(format!("line {line}: {}", e.to_string().trim_start_matches("graph: "))))?;
        match kw.as_str() {
            "edge" => {
                g.edges.insert((args[0], args[1]));
            }
            "init" => g.init.extend(args),
            _ => g.fail.extend(args),
        }
    }
    Ok(g)
}

/// Encodes `(G, I, F)`: the theory `T(G)` (distinctness for `i < j`, positive
/// and negative edge facts, domain closure) and the clauses `R(I, F)` for `X/1`.
pub fn encode_graph(g: &GraphSpec) -> Problem {
    let a = GraphSpec::node_constant;
    let e = |pos: bool, s: Term, t: Term| Literal::pred(pos, "E", vec![s, t]);
    let x = |pos: bool, t: Term| Literal::pvar(pos, "X", vec![t]);
    let (u, v) = (Term::var("u"), Term::var("v"));
    let mut theory = Vec::new();
    for i in 1..=g.nodes {
        for j in (i + 1)..=g.nodes {
            theory.push(Clause::unit(Literal::neq(a(i), a(j))));
        }
    }
    for i in 1..=g.nodes {
        for j in 1..=g.nodes {
            if g.edges.contains(&(i, j)) {
                theory.push(Clause::unit(e(true, a(i), a(j))));
            }
        }
    }
    for i in 1..=g.nodes {
        for j in 1..=g.nodes {
            if !g.edges.contains(&(i, j)) {
                theory.push(Clause::unit(e(false, a(i), a(j))));
            }
        }
    }
    theory.push(Clause::new((1..=g.nodes).map(|i| Literal::eq(u.clone(), a(i))).collect()));

    let mut clauses: Vec<Clause> = g.init.iter().map(|&i| Clause::unit(x(true, a(i)))).collect();
    clauses.extend(g.fail.iter().map(|&i| Clause::unit(x(false, a(i)))));
    clauses.push(Clause::new(vec![x(false, u.clone()), e(false, u, v.clone()), x(true, v)]));
    Problem::from_parts(vec![PVarDecl::new(name("X"), 1)], clauses, theory).with_origin("graph reachability encoding")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> GraphSpec {
        parse_graph("nodes 3\nedge 1 2\ninit 1\nfail 3\n").unwrap()
    }

    #[test]
    fn three_node_counts() {
        let p = encode_graph(&example());
        let distinct = p.theory.iter().filter(|c| c.len() == 1 && c.literals()[0].is_constraint()).count();
        let pos = p.theory.iter().filter(|c| c.len() == 1 && c.literals()[0].positive && !c.literals()[0].is_equality()).count();
        let neg = p.theory.iter().filter(|c| c.len() == 1 && !c.literals()[0].positive && !c.literals()[0].is_equality()).count();
        assert_eq!((distinct, pos, neg), (3, 1, 8));
        assert_eq!(p.theory.len(), 13);
        assert_eq!(p.clauses.len(), 3);
        assert_eq!(p.clauses[0].to_problem_string(), "X(a1)");
        assert_eq!(p.clauses[1].to_problem_string(), "~X(a3)");
    }

    #[test]
    fn single_node() {
        let p = encode_graph(&parse_graph("nodes 1\n").unwrap());
        assert_eq!(p.theory.len(), 2);
        assert_eq!(p.theory[0].to_problem_string(), "~E(a1, a1)");
        assert_eq!(p.clauses.len(), 1);
    }

    #[test]
    fn overlapping_init_and_fail_still_encodes() {
        let g = parse_graph("nodes 2\ninit 1\nfail 1\n").unwrap();
        assert!(!g.has_solution());
        assert_eq!(encode_graph(&g).clauses.len(), 3);
    }

    #[test]
    fn reachability_solution() {
        let g = example();
        assert_eq!(g.reachable(), BTreeSet::from([1, 2]));
        assert!(g.has_solution());
        assert!(g.is_solution(0b011));
        assert!(!g.is_solution(0b001));
    }

    #[test]
    fn malformed_graphs() {
        assert!(parse_graph("edge 1 2\n").is_err());
        assert!(parse_graph("nodes 2\nedge 1 3\n").is_err());
        assert!(parse_graph("nodes 2\nloop 1\n").is_err());
    }
}
