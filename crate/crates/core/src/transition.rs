//! Full state-transition diagrams of small networks.
//!
//! States are `N`-bit big-endian integers (node 0 is the most significant
//! bit). The diagram is a functional graph: every state has exactly one
//! successor.

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::network::{BooleanNetwork, NetworkState};

pub const DEFAULT_MAX_NODES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionDiagram {
    successor: Vec<u32>,
}

impl TransitionDiagram {
    pub fn from_successors(successor: Vec<u32>) -> Result<Self> {
        let n = successor.len();
        if n == 0 {
            return Err(Error::Empty("transition diagram"));
        }
        if let Some((v, &s)) = successor.iter().enumerate().find(|(_, &s)| s as usize >= n) {
            return Err(Error::Shape(format!("state {v} maps to {s}, outside 0..{n}")));
        }
        Ok(Self { successor })
    }

    pub fn n_states(&self) -> usize {
        self.successor.len()
    }

    pub fn successor(&self, v: usize) -> usize {
        self.successor[v] as usize
    }

    pub fn successors(&self) -> &[u32] {
        &self.successor
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_states()];
        for &s in &self.successor {
            deg[s as usize] += 1;
        }
        deg
    }
}

/// Applies one synchronous step to every one of the `2^N` states.
pub fn build_transition_diagram(net: &BooleanNetwork, max_nodes: usize) -> Result<TransitionDiagram> {
    let n = net.n_nodes();
    if n > max_nodes || n > 31 {
        return Err(Error::TooManyNodes { nodes: n, cap: max_nodes.min(31) });
    }
    let mut next = vec![0u8; n];
    let successor = (0..1u64 << n)
        .map(|v| {
            let state = NetworkState::from_index(v, n);
            net.step_into(state.bits(), &mut next);
            next.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32)
        })
        .collect();
    Ok(TransitionDiagram { successor })
}

/// `2^N x 2^N` matrix with a single 1 per row at `(v, successor[v])`.
pub fn adjacency_matrix(diagram: &TransitionDiagram) -> BitMatrix {
    let n = diagram.n_states();
    let mut m = BitMatrix::zeros(n, n);
    for (v, &s) in diagram.successors().iter().enumerate() {
        m.set(v, s as usize, true);
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractorSet {
    /// Each cycle starts at its smallest state; cycles sorted by that state.
    pub cycles: Vec<Vec<usize>>,
    pub basin_size: Vec<usize>,
    /// Index into `cycles` for every state.
    pub attractor_of: Vec<usize>,
    /// Steps from each state to its cycle (0 on the cycle).
    pub transient_length: Vec<usize>,
}

impl AttractorSet {
    pub fn is_on_cycle(&self, v: usize) -> bool {
        self.transient_length[v] == 0
    }

    pub fn fixed_points(&self) -> usize {
        self.cycles.iter().filter(|c| c.len() == 1).count()
    }
}

/// Finds every cycle and assigns each state its attractor and transient
/// length, walking successor chains with white/grey/black marking.
pub fn find_attractors(diagram: &TransitionDiagram) -> AttractorSet {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let n = diagram.n_states();
    let mut color = vec![WHITE; n];
    let mut attractor_of = vec![usize::MAX; n];
    let mut transient = vec![0usize; n];
    let mut raw_cycles: Vec<Vec<usize>> = Vec::new();
    let mut path = Vec::new();

    for start in 0..n {
        if color[start] != WHITE {
            continue;
        }
        path.clear();
        let mut v = start;
        while color[v] == WHITE {
            color[v] = GREY;
            path.push(v);
            v = diagram.successor(v);
        }
        // everything on `path` before the hit point is transient
        let (id, mut depth, tail_end) = if color[v] == GREY {
            let pos = path.iter().position(|&u| u == v).expect("grey states are on the path");
            let id = raw_cycles.len();
            let cycle = path[pos..].to_vec();
            for &u in &cycle {
                attractor_of[u] = id;
                color[u] = BLACK;
            }
            raw_cycles.push(cycle);
            (id, 0, pos)
        } else {
            (attractor_of[v], transient[v], path.len())
        };
        for &u in path[..tail_end].iter().rev() {
            depth += 1;
            attractor_of[u] = id;
            transient[u] = depth;
            color[u] = BLACK;
        }
    }

    // rotate each cycle to its minimum and renumber in order of minima
    let mut order: Vec<usize> = (0..raw_cycles.len()).collect();
    let canon: Vec<Vec<usize>> = raw_cycles
        .iter()
        .map(|c| {
            let m = (0..c.len()).min_by_key(|&i| c[i]).unwrap();
            c[m..].iter().chain(&c[..m]).copied().collect()
        })
        .collect();
    order.sort_by_key(|&i| canon[i][0]);
    let mut renumber = vec![0; raw_cycles.len()];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    let cycles: Vec<Vec<usize>> = order.iter().map(|&i| canon[i].clone()).collect();
    let mut basin_size = vec![0; cycles.len()];
    for a in attractor_of.iter_mut() {
        *a = renumber[*a];
        basin_size[*a] += 1;
    }
    AttractorSet {
        cycles,
        basin_size,
        attractor_of,
        transient_length: transient,
    }
}

/// Iteration scheme for prestige.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrestigeIteration {
    /// `x <- A^T x`.
    #[default]
    Plain,
    /// `x <- (x + A^T x) / 2`; removes the rotation on limit cycles so the
    /// iteration settles, at the cost of keeping some mass on transients for
    /// longer.
    Lazy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrestigeOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub iteration: PrestigeIteration,
}

impl Default for PrestigeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 1000,
            iteration: PrestigeIteration::Plain,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrestigeVector {
    pub scores: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
}

impl PrestigeVector {
    /// Highest-scoring state; ties go to the smaller id.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (v, &s) in self.scores.iter().enumerate() {
            if s > self.scores[best] {
                best = v;
            }
        }
        best
    }

    /// States sorted by descending score, ties by ascending id.
    pub fn ranking_desc(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.scores.len()).collect();
        idx.sort_by(|&a, &b| self.scores[b].total_cmp(&self.scores[a]).then(a.cmp(&b)));
        idx
    }

    /// States sorted by ascending score, ties by ascending id.
    pub fn ranking_asc(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.scores.len()).collect();
        idx.sort_by(|&a, &b| self.scores[a].total_cmp(&self.scores[b]).then(a.cmp(&b)));
        idx
    }
}

/// Internal (incoming-edge) eigenvector centrality by power iteration from
/// the uniform vector, L2-normalized every round. Stops once the largest
/// per-state change drops below `tol`; otherwise reports `converged: false`
/// after `max_iter` rounds.
pub fn prestige_centrality(diagram: &TransitionDiagram, opts: PrestigeOptions) -> PrestigeVector {
    let n = diagram.n_states();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    for iter in 1..=opts.max_iter {
        match opts.iteration {
            PrestigeIteration::Plain => next.iter_mut().for_each(|y| *y = 0.0),
            PrestigeIteration::Lazy => next.iter_mut().zip(&x).for_each(|(y, &xv)| *y = 0.5 * xv),
        }
        let weight = match opts.iteration {
            PrestigeIteration::Plain => 1.0,
            PrestigeIteration::Lazy => 0.5,
        };
        for (v, &s) in diagram.successors().iter().enumerate() {
            next[s as usize] += weight * x[v];
        }
        let norm = next.iter().map(|y| y * y).sum::<f64>().sqrt();
        next.iter_mut().for_each(|y| *y /= norm);
        let change = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if change < opts.tol {
            return PrestigeVector {
                scores: x,
                iterations_used: iter,
                converged: true,
            };
        }
    }
    PrestigeVector {
        scores: x,
        iterations_used: opts.max_iter,
        converged: false,
    }
}
