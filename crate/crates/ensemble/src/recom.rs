//! Recombination Markov chain: merge two adjacent districts, draw a uniform
//! spanning tree of the union, and cut one balanced tree edge.

use log::{debug, info};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::districting::Districting;
use crate::error::ChainError;
use crate::graph::GraphInstance;

/// Spanning trees drawn per step before giving up and self-looping.
pub const TREE_ATTEMPTS: usize = 100;

/// Full restarts of recursive-bisection seeding.
pub const SEED_ATTEMPTS: usize = 100;

/// Name of the PRNG behind every seeded run.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

pub fn chain_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The post-burn-in states of one chain.
#[derive(Clone, Debug)]
pub struct ChainRun {
    pub samples: Vec<Districting>,
    /// Steps that left the state unchanged because no balanced split was
    /// found.
    pub self_loops: usize,
}

/// A region's induced subgraph with local indices.
struct Region {
    nodes: Vec<usize>,
    adj: Vec<Vec<usize>>,
    pops: Vec<u64>,
}

impl Region {
    fn new(g: &GraphInstance, nodes: Vec<usize>) -> Self {
        let mut local = vec![usize::MAX; g.len()];
        for (k, &v) in nodes.iter().enumerate() {
            local[v] = k;
        }
        let adj = nodes
            .iter()
            .map(|&v| g.neighbors(v).filter_map(|w| (local[w] != usize::MAX).then_some(local[w])).collect())
            .collect();
        let pops = nodes.iter().map(|&v| g.nodes()[v].pop).collect();
        Region { nodes, adj, pops }
    }

    fn total(&self) -> u64 {
        self.pops.iter().sum()
    }

    /// Wilson's algorithm: a uniformly random spanning tree as parent
    /// pointers toward a random root.
    fn spanning_tree<R: Rng>(&self, rng: &mut R) -> (usize, Vec<usize>) {
        let n = self.nodes.len();
        let root = rng.gen_range(0..n);
        let mut in_tree = vec![false; n];
        let mut next = vec![usize::MAX; n];
        in_tree[root] = true;
        for start in 0..n {
            let mut u = start;
            while !in_tree[u] {
                let w = *self.adj[u].choose(rng).expect("region is connected");
                next[u] = w;
                u = w;
            }
            let mut u = start;
            while !in_tree[u] {
                in_tree[u] = true;
                u = next[u];
            }
        }
        (root, next)
    }

    /// Draws one spanning tree and returns a uniformly chosen cut whose
    /// subtree population passes `accept`, as a membership mask for the
    /// subtree side.
    fn try_split<R: Rng>(&self, rng: &mut R, accept: impl Fn(u64) -> bool) -> Option<(Vec<bool>, u64)> {
        let n = self.nodes.len();
        let (root, parent) = self.spanning_tree(rng);
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if v != root {
                children[parent[v]].push(v);
            }
        }
        let mut order = Vec::with_capacity(n);
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            order.extend_from_slice(&children[v]);
        }
        let mut sub = self.pops.clone();
        for &v in order.iter().rev() {
            if v != root {
                sub[parent[v]] += sub[v];
            }
        }
        let candidates: Vec<usize> = order.iter().copied().filter(|&v| v != root && accept(sub[v])).collect();
        let &cut = candidates.choose(rng)?;
        let mut side = vec![false; n];
        let mut stack = vec![cut];
        while let Some(v) = stack.pop() {
            side[v] = true;
            stack.extend_from_slice(&children[v]);
        }
        Some((side, sub[cut]))
    }
}

/// Whether `pop` averages within tolerance over `k` districts.
fn balanced(g: &GraphInstance, pop: u64, k: usize) -> bool {
    let total = g.total_pop() as f64;
    let m = g.m() as f64;
    ((pop as f64) * m - (k as f64) * total).abs() <= g.epsilon() * (k as f64) * total
}

/// One recombination move. Returns `d` unchanged when no cut edge exists or
/// no balanced split is found within [`TREE_ATTEMPTS`] trees.
pub fn recom_step<R: Rng>(g: &GraphInstance, d: &Districting, rng: &mut R) -> Districting {
    let cut_edges: Vec<(usize, usize)> =
        g.edge_ends().iter().copied().filter(|&(a, b)| d.district_of(a) != d.district_of(b)).collect();
    let Some(&(a, b)) = cut_edges.choose(rng) else { return d.clone() };
    let (da, db) = (d.district_of(a), d.district_of(b));
    let nodes: Vec<usize> = (0..g.len()).filter(|&v| d.district_of(v) == da || d.district_of(v) == db).collect();
    let region = Region::new(g, nodes);
    let total = region.total();
    for _ in 0..TREE_ATTEMPTS {
        if let Some((side, _)) = region.try_split(rng, |s| g.pop_ok(s) && g.pop_ok(total - s)) {
            let mut next = d.clone();
            let raw = next.raw_mut();
            for (k, &v) in region.nodes.iter().enumerate() {
                raw[v] = if side[k] { da as u16 } else { db as u16 };
            }
            return next;
        }
    }
    d.clone()
}

fn bisect<R: Rng>(g: &GraphInstance, nodes: Vec<usize>, k: usize, label: usize, out: &mut [u16], rng: &mut R) -> bool {
    if k == 1 {
        for v in nodes {
            out[v] = label as u16;
        }
        return true;
    }
    let region = Region::new(g, nodes);
    let total = region.total();
    let (k1, k2) = (k / 2, k - k / 2);
    let fits = |s: u64, ks: usize, kr: usize| balanced(g, s, ks) && balanced(g, total - s, kr);
    for _ in 0..TREE_ATTEMPTS {
        let Some((side, s)) = region.try_split(rng, |s| fits(s, k1, k2) || fits(s, k2, k1)) else { continue };
        let sub_k = if fits(s, k1, k2) { k1 } else { k2 };
        let (mut inner, mut outer) = (Vec::new(), Vec::new());
        for (k, &v) in region.nodes.iter().enumerate() {
            if side[k] {
                inner.push(v);
            } else {
                outer.push(v);
            }
        }
        return bisect(g, inner, sub_k, label, out, rng) && bisect(g, outer, k - sub_k, label + sub_k, out, rng);
    }
    false
}

/// Recursive spanning-tree bisection into `m` balanced connected districts.
pub fn seed_districting<R: Rng>(g: &GraphInstance, rng: &mut R) -> Result<Districting, ChainError> {
    for attempt in 0..SEED_ATTEMPTS {
        let mut out = vec![0u16; g.len()];
        if bisect(g, (0..g.len()).collect(), g.m(), 0, &mut out, rng) {
            let d = Districting::from_zero_based(g.m(), out);
            d.validate(g)?;
            debug!("seeded after {} attempt(s)", attempt + 1);
            return Ok(d);
        }
    }
    Err(ChainError::Seeding { attempts: SEED_ATTEMPTS })
}

/// Runs `steps` recombination steps from a seeded start and keeps states
/// `burn_in..steps`.
pub fn run_chain(g: &GraphInstance, steps: usize, burn_in: usize, seed: u64) -> Result<ChainRun, ChainError> {
    if steps < burn_in {
        return Err(ChainError::Schedule { steps, burn_in });
    }
    let mut rng = chain_rng(seed);
    let start = seed_districting(g, &mut rng)?;
    run_chain_from(g, start, steps, burn_in, &mut rng)
}

/// As [`run_chain`], from a given valid start and RNG.
pub fn run_chain_from<R: Rng>(
    g: &GraphInstance,
    start: Districting,
    steps: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<ChainRun, ChainError> {
    if steps < burn_in {
        return Err(ChainError::Schedule { steps, burn_in });
    }
    start.validate(g)?;
    let mut state = start;
    let mut samples = Vec::with_capacity(steps - burn_in);
    let mut self_loops = 0;
    for t in 0..steps {
        if t >= burn_in {
            samples.push(state.clone());
        }
        if t + 1 == steps {
            break;
        }
        let next = recom_step(g, &state, rng);
        if next == state {
            self_loops += 1;
        } else {
            next.validate(g).map_err(|e| ChainError::Invariant { step: t + 1, source: e })?;
        }
        state = next;
    }
    info!("chain finished: {} samples, {} self-loops", samples.len(), self_loops);
    Ok(ChainRun { samples, self_loops })
}
