//! Simple undirected graphs.
//!
//! The edge set is the single source of truth; it is stored as sorted adjacency
//! lists and the dense adjacency matrix is built on demand for spectral work.

mod matching;
mod spectral;

pub use matching::{matching_size, maximum_matching};
pub use spectral::{
    min_eigenvalue, padded_submatrix, restricted_submatrix, spectral_norm, symmetric_eig,
    symmetric_eigenvalues, threshold_rank, SymmetricSpectrum,
};

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Build from an edge list; rejects self loops, out-of-range vertices and duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            if !g.add_edge(u, v)? {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// Insert `{u, v}`. Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Dense symmetric 0/1 adjacency matrix with zero diagonal.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                a[(u, v)] = 1.0;
            }
        }
        a
    }

    /// Adjacency matrix of the subgraph induced on `vertices`, rows in the given order.
    pub fn induced_adjacency(&self, vertices: &[usize]) -> DMatrix<f64> {
        let m = vertices.len();
        DMatrix::from_fn(m, m, |a, b| {
            if self.has_edge(vertices[a], vertices[b]) {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Subgraph induced on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            index[v] = i;
        }
        let mut g = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && j > i {
                    g.add_edge(i, j)?;
                }
            }
        }
        Ok(g)
    }

    /// Connected components restricted to `vertices`: returns the number of components.
    pub fn component_count_within(&self, vertices: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &v in vertices {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for &start in vertices {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.n).collect();
        self.component_count_within(&all) <= 1
    }

    /// Serialize in the toolkit edge-list format: `n m` then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.edge_count).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_edge_list().as_bytes())?;
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))??;
        let (n, m) = parse_pair(&header)?;
        let mut g = Graph::new(n);
        let mut read = 0;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (u, v) = parse_pair(&line)?;
            if u >= v {
                return Err(Error::Parse(format!("edge line must satisfy u < v: {line:?}")));
            }
            if !g.add_edge(u, v)? {
                return Err(Error::DuplicateEdge(u, v));
            }
            read += 1;
        }
        if read != m {
            return Err(Error::Parse(format!("header promises {m} edges, found {read}")));
        }
        Ok(g)
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        Graph::read_edge_list(text.as_bytes())
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_ascii_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse(format!("expected two integers, got {line:?}"))),
    }
}

/// Degree of every vertex, indexed by vertex.
pub fn degree_sequence(g: &Graph) -> Vec<usize> {
    (0..g.n()).map(|v| g.degree(v)).collect()
}

/// Sort and deduplicate a vertex list.
pub fn normalize_set(mut s: Vec<usize>) -> Vec<usize> {
    s.sort_unstable();
    s.dedup();
    s
}

/// Vertices of `[n]` not in the ascending set `s`.
pub fn complement(n: usize, s: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; n];
    for &v in s {
        inside[v] = true;
    }
    (0..n).filter(|&v| !inside[v]).collect()
}

/// Size of the symmetric difference of two ascending vertex sets.
pub fn symmetric_difference_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}
