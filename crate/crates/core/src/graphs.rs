//! Graphs, stabilizer generators and graph-state projectors.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linops::{Dims, Operator, Pauli, PauliString};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;
    fn try_from(g: GraphJson) -> Result<Graph> {
        Graph::new(g.n, g.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> GraphJson {
        GraphJson {
            n: g.n,
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub red: BTreeSet<usize>,
    pub blue: BTreeSet<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    GhzStar(usize),
    LinearCluster(usize),
    Grid(usize, usize),
}

impl GraphKind {
    /// Parses "ghz-star:5", "linear-cluster:4" or "grid:2x3".
    pub fn parse(s: &str) -> Result<GraphKind> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected kind:size, got {s:?}")))?;
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad size {t:?}")))
        };
        match kind {
            "ghz-star" => Ok(GraphKind::GhzStar(num(arg)?)),
            "linear-cluster" | "path" => Ok(GraphKind::LinearCluster(num(arg)?)),
            "grid" => {
                let (r, c) = arg
                    .split_once('x')
                    .ok_or_else(|| Error::Parse(format!("grid size {arg:?} is not RxC")))?;
                Ok(GraphKind::Grid(num(r)?, num(c)?))
            }
            other => Err(Error::Graph(format!("unknown graph kind {other:?}"))),
        }
    }
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Graph(format!("self-loop at {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::Graph(format!("edge ({a},{b}) out of range for n={n}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph { n, edges: set })
    }

    pub fn named(kind: GraphKind) -> Result<Graph> {
        match kind {
            GraphKind::GhzStar(n) => {
                check_size(n)?;
                Graph::new(n, (1..n).map(|j| (0, j)))
            }
            GraphKind::LinearCluster(n) => {
                check_size(n)?;
                Graph::new(n, (1..n).map(|j| (j - 1, j)))
            }
            GraphKind::Grid(r, c) => {
                if r * c < 2 {
                    return Err(Error::Graph("grid needs at least 2 vertices".into()));
                }
                let mut e = Vec::new();
                for i in 0..r {
                    for j in 0..c {
                        let v = i * c + j;
                        if j + 1 < c {
                            e.push((v, v + 1));
                        }
                        if i + 1 < r {
                            e.push((v, v + c));
                        }
                    }
                }
                Graph::new(r * c, e)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// X at `i`, Z on each neighbour.
    pub fn generator(&self, i: usize) -> Result<PauliString> {
        if i >= self.n {
            return Err(Error::Graph(format!("vertex {i} out of range")));
        }
        let mut ops = vec![Pauli::I; self.n];
        ops[i] = Pauli::X;
        for j in self.neighbors(i) {
            ops[j] = Pauli::Z;
        }
        Ok(PauliString::new(ops))
    }

    pub fn generators(&self) -> Vec<PauliString> {
        (0..self.n)
            .map(|i| self.generator(i).expect("in range"))
            .collect()
    }

    /// Y on even-degree vertices, X on odd-degree ones; flips the sign of every generator.
    pub fn mirror_unitary(&self) -> PauliString {
        PauliString::new(
            (0..self.n)
                .map(|v| {
                    if self.neighbors(v).len() % 2 == 0 {
                        Pauli::Y
                    } else {
                        Pauli::X
                    }
                })
                .collect(),
        )
    }

    /// Breadth-first two-colouring; the lowest vertex of each component is red.
    pub fn two_coloring(&self) -> Option<Coloring> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(true);
            let mut q = VecDeque::from([start]);
            while let Some(v) = q.pop_front() {
                let cv = color[v].expect("visited");
                for w in self.neighbors(v) {
                    match color[w] {
                        None => {
                            color[w] = Some(!cv);
                            q.push_back(w);
                        }
                        Some(cw) if cw == cv => return None,
                        _ => {}
                    }
                }
            }
        }
        let mut out = Coloring {
            red: BTreeSet::new(),
            blue: BTreeSet::new(),
        };
        for (v, c) in color.iter().enumerate() {
            if c.expect("all visited") {
                out.red.insert(v);
            } else {
                out.blue.insert(v);
            }
        }
        Some(out)
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Graph(format!("need n >= 2, got {n}")))
    } else {
        Ok(())
    }
}

/// X...X followed by Z_i Z_{i+1} for i = 0..n-2.
pub fn ghz_generators(n: usize) -> Result<Vec<PauliString>> {
    check_size(n)?;
    let mut gens = vec![PauliString::new(vec![Pauli::X; n])];
    for i in 0..n - 1 {
        let mut ops = vec![Pauli::I; n];
        ops[i] = Pauli::Z;
        ops[i + 1] = Pauli::Z;
        gens.push(PauliString::new(ops));
    }
    Ok(gens)
}

/// First Pauli string (in I < X < Y < Z order) anticommuting with every generator.
pub fn anticommuting_pauli(gens: &[PauliString]) -> Option<PauliString> {
    let n = gens.first()?.len();
    let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    (0..4usize.pow(n as u32)).find_map(|mut code| {
        let mut ops = vec![Pauli::I; n];
        for q in (0..n).rev() {
            ops[q] = all[code % 4];
            code /= 4;
        }
        let p = PauliString::new(ops);
        gens.iter().all(|g| !p.commutes_with(g)).then_some(p)
    })
}

/// All 2^k products of subsets of the generators, in binary subset order.
pub fn stabilizer_elements(gens: &[PauliString]) -> Result<Vec<PauliString>> {
    let n = gens
        .first()
        .ok_or_else(|| Error::Graph("no generators".into()))?
        .len();
    for (a, g) in gens.iter().enumerate() {
        if g.len() != n {
            return Err(Error::Pauli("generators differ in length".into()));
        }
        for h in &gens[a + 1..] {
            if !g.commutes_with(h) {
                return Err(Error::NonCommuting(g.to_string(), h.to_string()));
            }
        }
    }
    let mut out = Vec::with_capacity(1 << gens.len());
    for mask in 0..(1usize << gens.len()) {
        let mut p = PauliString::identity(n);
        for (k, g) in gens.iter().enumerate() {
            if mask >> k & 1 == 1 {
                p = p.mul(g)?;
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// Σ s / 2^k over the stabilizer group, i.e. Π (I + g)/2.
pub fn graph_projector(gens: &[PauliString]) -> Result<Operator> {
    let elems = stabilizer_elements(gens)?;
    let n = gens[0].len();
    let mut acc = Operator::zeros(Dims::qubits(n));
    for s in &elems {
        acc = &acc + &s.to_operator();
    }
    Ok(acc.scale(1.0 / elems.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::{cr, CVec};

    fn ghz_vec(n: usize) -> CVec {
        let mut v = CVec::zeros(1 << n);
        let s = 0.5f64.sqrt();
        v[0] = cr(s);
        v[(1 << n) - 1] = cr(s);
        v
    }

    #[test]
    fn cluster_generator_labels() {
        let g = Graph::named(GraphKind::LinearCluster(4)).unwrap();
        assert_eq!(g.generator(0).unwrap().label(), "XZII");
        assert_eq!(g.generator(2).unwrap().label(), "IZXZ");
        let iso = Graph::new(3, [(0, 1)]).unwrap();
        assert_eq!(iso.generator(2).unwrap().label(), "IIX");
        assert!(g.generator(4).is_err());
    }

    #[test]
    fn ghz_generator_list() {
        let labels: Vec<String> = ghz_generators(3)
            .unwrap()
            .iter()
            .map(|g| g.label())
            .collect();
        assert_eq!(labels, vec!["XXX", "ZZI", "IZZ"]);
        assert!(ghz_generators(1).is_err());
    }

    #[test]
    fn ghz_generators_stabilize() {
        for n in 2..=5 {
            let v = ghz_vec(n);
            for g in ghz_generators(n).unwrap() {
                let w = g.to_operator().data() * &v;
                assert!((w - &v).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn two_qubit_group() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let elems = stabilizer_elements(&g.generators()).unwrap();
        let shown: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
        // XZ * ZX = (XZ)(ZX) = (-iY)(iY) = YY
        assert_eq!(shown, vec!["+II", "+XZ", "+ZX", "+YY"]);
    }

    #[test]
    fn projector_is_ghz() {
        let p = graph_projector(&ghz_generators(3).unwrap()).unwrap();
        let want = Operator::projector(&ghz_vec(3), Dims::qubits(3)).unwrap();
        assert!(p.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn two_qubit_graph_state_rank_one() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let p = graph_projector(&g.generators()).unwrap();
        let ev = p.eigenvalues();
        assert!(ev[..3].iter().all(|x| x.abs() < 1e-12));
        assert!((ev[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_commuting_rejected() {
        let a = PauliString::parse("XI").unwrap();
        let b = PauliString::parse("ZI").unwrap();
        assert!(stabilizer_elements(&[a, b]).is_err());
    }

    #[test]
    fn colorings() {
        let c = Graph::named(GraphKind::LinearCluster(4))
            .unwrap()
            .two_coloring()
            .unwrap();
        assert_eq!(c.red, BTreeSet::from([0, 2]));
        assert_eq!(c.blue, BTreeSet::from([1, 3]));
        let tri = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(tri.two_coloring().is_none());
        let star = Graph::named(GraphKind::GhzStar(5)).unwrap().two_coloring().unwrap();
        assert_eq!(star.red, BTreeSet::from([0]));
        assert_eq!(star.blue, BTreeSet::from([1, 2, 3, 4]));
    }

    #[test]
    fn named_edge_sets() {
        let p = Graph::named(GraphKind::LinearCluster(4)).unwrap();
        assert_eq!(p.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
        let s = Graph::named(GraphKind::GhzStar(3)).unwrap();
        assert_eq!(s.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
        assert_eq!(Graph::named(GraphKind::Grid(2, 2)).unwrap().edges().len(), 4);
        assert_eq!(GraphKind::parse("grid:2x3").unwrap(), GraphKind::Grid(2, 3));
        assert!(GraphKind::parse("wheel:4").is_err());
    }

    #[test]
    fn json_format() {
        let g: Graph = serde_json::from_str(r#"{"n":3,"edges":[[0,1],[2,1]]}"#).unwrap();
        assert_eq!(g.neighbors(1), vec![0, 2]);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn cluster_mirror_unitary() {
        let g = Graph::named(GraphKind::LinearCluster(4)).unwrap();
        let u = g.mirror_unitary();
        assert_eq!(u.label(), "XYYX");
        for gen in g.generators() {
            assert!(!u.commutes_with(&gen));
        }
    }

    #[test]
    fn ghz_anticommuting_string() {
        let gens = ghz_generators(3).unwrap();
        let p = anticommuting_pauli(&gens).unwrap();
        assert!(gens.iter().all(|g| !p.commutes_with(g)));
        assert!(anticommuting_pauli(&[PauliString::parse("ZZ").unwrap(), PauliString::parse("II").unwrap()]).is_none());
    }
}
