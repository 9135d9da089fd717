/// Maximum family of pairwise disjoint sets, returned as indices into `sets`.
///
/// Vertices are dense ids below `n_vertices`. With `stop_at = Some(m)` the
/// search returns as soon as `m` disjoint sets are found.
pub fn max_packing(sets: &[Vec<usize>], n_vertices: usize, stop_at: Option<usize>) -> Vec<usize> {
    let Some(min_size) = sets.iter().map(Vec::len).min() else {
        return Vec::new();
    };
    if min_size == 0 {
        // empty sets are disjoint from everything; take them all
        return (0..sets.len()).filter(|&i| sets[i].is_empty()).collect();
    }
    let mut by_vertex = vec![Vec::new(); n_vertices];
    for (i, set) in sets.iter().enumerate() {
        for &v in set {
            by_vertex[v].push(i);
        }
    }
    let mut packer = Packer {
        sets,
        by_vertex,
        usable: vec![true; n_vertices],
        chosen: Vec::new(),
        best: Vec::new(),
        target: stop_at.unwrap_or(usize::MAX),
        min_size,
    };
    packer.search();
    packer.best
}

struct Packer<'a> {
    sets: &'a [Vec<usize>],
    by_vertex: Vec<Vec<usize>>,
    usable: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    target: usize,
    min_size: usize,
}

impl Packer<'_> {
    fn available(&self, set: usize) -> bool {
        self.sets[set].iter().all(|&v| self.usable[v])
    }

    /// Returns true once the target is reached.
    fn search(&mut self) -> bool {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
            if self.best.len() >= self.target {
                return true;
            }
        }
        let mut live = 0;
        let mut first = None;
        for v in 0..self.usable.len() {
            if self.usable[v] && self.by_vertex[v].iter().any(|&s| self.available(s)) {
                live += 1;
                first.get_or_insert(v);
            }
        }
        let Some(v) = first else {
            return false;
        };
        if self.chosen.len() + live / self.min_size <= self.best.len() {
            return false;
        }
        for idx in 0..self.by_vertex[v].len() {
            let set = self.by_vertex[v][idx];
            if !self.available(set) {
                continue;
            }
            for &u in &self.sets[set] {
                self.usable[u] = false;
            }
            self.chosen.push(set);
            let done = self.search();
            self.chosen.pop();
            for &u in &self.sets[set] {
                self.usable[u] = true;
            }
            if done {
                return true;
            }
        }
        // leave v uncovered
        self.usable[v] = false;
        let done = self.search();
        self.usable[v] = true;
        done
    }
}
