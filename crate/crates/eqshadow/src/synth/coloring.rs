//! Proper edge coloring with at most Delta + 1 colors and the CZ layering
//! built on it.

use crate::qsim::{Circuit, Gate};

use super::{CzGraph, SynthError};

/// Proper edge coloring with colors `0..Delta+1`, lowest-free-color
/// tie-breaking. Complete graphs take a round-robin fast path that achieves
/// the chromatic index exactly.
pub fn edge_coloring(g: &CzGraph) -> Vec<Vec<(usize, usize)>> {
    if g.is_complete() && g.n() >= 2 {
        return round_robin_complete(g.n());
    }
    misra_gries(g)
}

/// Round-robin schedule for K_n: n-1 rounds for even n, n rounds for odd n.
fn round_robin_complete(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut layers = Vec::new();
    if n % 2 == 1 {
        // vertices on a circle; round r pairs i+j = r (mod n)
        for r in 0..n {
            let mut layer = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if (i + j) % n == r % n {
                        layer.push((i, j));
                    }
                }
            }
            layers.push(layer);
        }
    } else {
        // hub n-1 fixed, others rotate
        let m = n - 1;
        for r in 0..m {
            let mut layer = vec![(r, n - 1)];
            for k in 1..=(m - 1) / 2 {
                let a = (r + k) % m;
                let b = (r + m - k) % m;
                layer.push((a.min(b), a.max(b)));
            }
            layers.push(layer);
        }
    }
    layers.retain(|l| !l.is_empty());
    layers
}

struct ColorState {
    /// used[v][c] = neighbor joined to v by an edge of color c.
    used: Vec<Vec<Option<usize>>>,
    max_colors: usize,
}

impl ColorState {
    fn new(n: usize, max_colors: usize) -> Self {
        Self {
            used: vec![vec![None; max_colors]; n],
            max_colors,
        }
    }

    fn free_color(&self, v: usize) -> usize {
        (0..self.max_colors)
            .find(|&c| self.used[v][c].is_none())
            .expect("Delta+1 colors always leave one free")
    }

    fn is_free(&self, v: usize, c: usize) -> bool {
        self.used[v][c].is_none()
    }

    fn set(&mut self, u: usize, v: usize, c: usize) {
        self.used[u][c] = Some(v);
        self.used[v][c] = Some(u);
    }

    fn unset(&mut self, u: usize, v: usize, c: usize) {
        debug_assert_eq!(self.used[u][c], Some(v));
        self.used[u][c] = None;
        self.used[v][c] = None;
    }

    fn color_of(&self, u: usize, v: usize) -> Option<usize> {
        (0..self.max_colors).find(|&c| self.used[u][c] == Some(v))
    }
}

/// Misra-Gries: fans, cd-path inversion, fan rotation.
fn misra_gries(g: &CzGraph) -> Vec<Vec<(usize, usize)>> {
    let n = g.n();
    let delta = g.max_degree();
    let max_colors = delta + 1;
    if g.edges().is_empty() {
        return Vec::new();
    }
    let mut st = ColorState::new(n, max_colors);

    for &(u, v) in g.edges() {
        // maximal fan of u starting at v
        let mut fan = vec![v];
        loop {
            let last = *fan.last().expect("nonempty");
            let next = (0..st.max_colors).find_map(|c| {
                st.used[u][c].filter(|w| !fan.contains(w) && st.is_free(last, c))
            });
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = st.free_color(u);
        let d = st.free_color(*fan.last().expect("nonempty"));
        if c != d {
            invert_cd_path(&mut st, u, c, d);
        }
        // after inversion d is free on u; find a fan prefix ending where d is
        // free, revalidating the fan property under the updated colors
        let mut chosen = None;
        'outer: for (idx, &w) in fan.iter().enumerate() {
            if !st.is_free(w, d) {
                continue;
            }
            for i in 0..idx {
                let cw = st
                    .color_of(u, fan[i + 1])
                    .expect("fan edges beyond the first are colored");
                if !st.is_free(fan[i], cw) {
                    continue 'outer;
                }
            }
            chosen = Some(idx);
            break;
        }
        let w_idx = chosen.expect("Misra-Gries guarantees a rotatable prefix");
        // rotate: shift colors toward u, freeing the edge (u, fan[w_idx])
        for i in 0..w_idx {
            let cnext = st.color_of(u, fan[i + 1]).expect("colored fan edge");
            st.unset(u, fan[i + 1], cnext);
            if let Some(cprev) = st.color_of(u, fan[i]) {
                st.unset(u, fan[i], cprev);
            }
            st.set(u, fan[i], cnext);
        }
        debug_assert!(st.color_of(u, fan[w_idx]).is_none());
        st.set(u, fan[w_idx], d);
    }

    let mut layers = vec![Vec::new(); max_colors];
    for &(u, v) in g.edges() {
        let c = st.color_of(u, v).expect("all edges colored");
        layers[c].push((u, v));
    }
    layers.retain(|l| !l.is_empty());
    layers
}

/// Invert the maximal path through `u` whose edges alternate colors d, c.
fn invert_cd_path(st: &mut ColorState, u: usize, c: usize, d: usize) {
    let mut path = Vec::new();
    let mut prev = u;
    let mut want = d;
    while let Some(next) = st.used[prev][want] {
        path.push((prev, next, want));
        prev = next;
        want = if want == d { c } else { d };
    }
    for &(a, b, col) in &path {
        st.unset(a, b, col);
    }
    for &(a, b, col) in &path {
        let swapped = if col == d { c } else { d };
        st.set(a, b, swapped);
    }
}

/// Schedule the CZ gates of a graph into layers with disjoint supports. The
/// layer count never exceeds n for a simple graph on n vertices.
pub fn cz_layers_edge_coloring(g: &CzGraph) -> Result<Circuit, SynthError> {
    let layers = edge_coloring(g);
    let mut circuit = Circuit::new(g.n());
    for layer in layers {
        circuit
            .push_layer(layer.into_iter().map(|(a, b)| Gate::Cz(a, b)).collect())
            .map_err(SynthError::Circuit)?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use std::collections::HashSet;

    fn validate_layers(g: &CzGraph, layers: &[Vec<(usize, usize)>]) {
        // every layer a matching, union equals edge set exactly once
        let mut seen = HashSet::new();
        for layer in layers {
            let mut touched = HashSet::new();
            for &(a, b) in layer {
                assert!(touched.insert(a), "vertex {a} repeated in layer");
                assert!(touched.insert(b), "vertex {b} repeated in layer");
                assert!(seen.insert((a, b)), "edge repeated");
            }
        }
        let want: HashSet<(usize, usize)> = g.edges().iter().copied().collect();
        assert_eq!(seen, want);
    }

    #[test]
    fn empty_graph_has_no_layers() {
        let g = CzGraph::new(5, vec![]).unwrap();
        assert!(edge_coloring(&g).is_empty());
        assert_eq!(cz_layers_edge_coloring(&g).unwrap().layers.len(), 0);
    }

    #[test]
    fn complete_k5_uses_exactly_five_layers() {
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                edges.push((i, j));
            }
        }
        let g = CzGraph::new(5, edges).unwrap();
        let layers = edge_coloring(&g);
        validate_layers(&g, &layers);
        assert_eq!(layers.len(), 5);
    }

    #[test]
    fn complete_even_graphs_meet_chromatic_index() {
        for n in [2usize, 4, 6, 8] {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    edges.push((i, j));
                }
            }
            let g = CzGraph::new(n, edges).unwrap();
            let layers = edge_coloring(&g);
            validate_layers(&g, &layers);
            assert_eq!(layers.len(), n - 1);
        }
    }

    #[test]
    fn random_graphs_within_n_layers() {
        let mut rng = crate::rng::stream_rng(71, 0, 0);
        for &n in &[3usize, 8, 16, 33, 64] {
            for density in [0.1, 0.5, 0.9] {
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        if rng.gen_bool(density) {
                            edges.push((i, j));
                        }
                    }
                }
                let g = CzGraph::new(n, edges).unwrap();
                let layers = edge_coloring(&g);
                validate_layers(&g, &layers);
                assert!(layers.len() <= g.max_degree() + 1);
                assert!(layers.len() <= n);
            }
        }
    }

    #[test]
    fn misra_gries_path_without_fast_path() {
        // force the general algorithm on a path graph
        let g = CzGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let layers = misra_gries(&g);
        validate_layers(&g, &layers);
        assert!(layers.len() <= 3);
    }
}
