//! Directed graphs and strongly connected components.
//!
//! Backs the sampling procedures that repeatedly condense an implication
//! graph: spanning-set search keeps one representative per source
//! component, and the contraction process tracks how the number of
//! source components shrinks over time. Tarjan's algorithm runs with an
//! explicit stack so deep graphs cannot overflow the call stack, and
//! every ordering is fixed by vertex number, so runs are deterministic.

/// A directed graph on vertices `0..n` with adjacency lists in
/// insertion order. Parallel edges and self-loops are allowed; neither
/// affects the component structure.
#[derive(Clone, Debug)]
pub struct Digraph {
    adj: Vec<Vec<u32>>,
    edges: usize,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            adj: vec![Vec::new(); n],
            edges: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn add_edge(&mut self, from: u32, to: u32) {
        assert!((from as usize) < self.adj.len());
        assert!((to as usize) < self.adj.len());
        self.adj[from as usize].push(to);
        self.edges += 1;
    }

    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }
}

/// A partition of the vertices into strongly connected components.
/// Component ids are assigned in completion order, so every edge runs
/// within one component or from a higher id to a lower one; id order is
/// a reverse topological sort of the condensation.
#[derive(Clone, Debug)]
pub struct SccDecomposition {
    pub component_of: Vec<u32>,
    pub component_count: usize,
}

impl SccDecomposition {
    /// Component ids with no incoming edge from another component: the
    /// sources of the condensation, in increasing id order.
    pub fn source_components(&self, g: &Digraph) -> Vec<u32> {
        let mut is_source = vec![true; self.component_count];
        for v in 0..g.vertex_count() as u32 {
            let cv = self.component_of[v as usize];
            for &w in g.out_neighbors(v) {
                let cw = self.component_of[w as usize];
                if cw != cv {
                    is_source[cw as usize] = false;
                }
            }
        }
        (0..self.component_count as u32)
            .filter(|&c| is_source[c as usize])
            .collect()
    }

    /// The smallest vertex of every source component, ascending.
    pub fn source_representatives(&self, g: &Digraph) -> Vec<u32> {
        let sources = self.source_components(g);
        let mut min_vertex = vec![u32::MAX; self.component_count];
        for v in (0..g.vertex_count() as u32).rev() {
            min_vertex[self.component_of[v as usize] as usize] = v;
        }
        let mut reps: Vec<u32> = sources
            .into_iter()
            .map(|c| min_vertex[c as usize])
            .collect();
        reps.sort_unstable();
        reps
    }
}

/// Tarjan's algorithm with an explicit frame stack. Vertices are rooted
/// in increasing order and adjacency lists are walked in insertion
/// order, so the decomposition is a pure function of the graph.
pub fn strongly_connected_components(g: &Digraph) -> SccDecomposition {
    const UNVISITED: u32 = u32::MAX;
    let n = g.vertex_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut component_of = vec![0u32; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut component_count = 0usize;
    // frames hold (vertex, position in its adjacency list)
    let mut frames: Vec<(u32, usize)> = Vec::new();

    for root in 0..n as u32 {
        if index[root as usize] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if let Some(&w) = g.out_neighbors(v).get(*pos) {
                *pos += 1;
                if index[w as usize] == UNVISITED {
                    index[w as usize] = next_index;
                    low[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    frames.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().expect("tarjan stack holds the component");
                        on_stack[w as usize] = false;
                        component_of[w as usize] = component_count as u32;
                        if w == v {
                            break;
                        }
                    }
                    component_count += 1;
                }
            }
        }
    }

    SccDecomposition {
        component_of,
        component_count,
    }
}
