/// Binary indexed tree over non-negative weights, used for proportional sampling.
#[derive(Debug, Clone)]
pub struct FenwickTree {
    tree: Vec<f64>,
    weights: Vec<f64>,
    len: usize,
}

impl FenwickTree {
    pub fn with_capacity(capacity: usize) -> Self {
        Self { tree: vec![0.0; capacity + 1], weights: vec![0.0; capacity], len: 0 }
    }

    /// Appends a new slot with the given weight.
    pub fn push(&mut self, weight: f64) {
        assert!(self.len < self.weights.len(), "fenwick capacity exceeded");
        self.len += 1;
        self.add(self.len - 1, weight);
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn add(&mut self, i: usize, delta: f64) {
        self.weights[i] += delta;
        let mut k = i + 1;
        while k < self.tree.len() {
            self.tree[k] += delta;
            k += k & k.wrapping_neg();
        }
    }

    /// Sum of weights in `0..end`.
    pub fn prefix_sum(&self, end: usize) -> f64 {
        let mut k = end;
        let mut s = 0.0;
        while k > 0 {
            s += self.tree[k];
            k &= k - 1;
        }
        s
    }

    pub fn total(&self) -> f64 {
        self.prefix_sum(self.len)
    }

    /// Smallest index `i` with `prefix_sum(i + 1) > target`, skipping
    /// zero-weight slots. `target` is clamped into `[0, total)`.
    pub fn find(&self, target: f64) -> usize {
        let mut pos = 0;
        let mut rem = target.max(0.0);
        let mut step = (self.tree.len() - 1).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= self.len && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        let mut i = pos.min(self.len - 1);
        // rounding can land on an exhausted slot; walk back to a live one
        while self.weights[i] <= 0.0 && i > 0 {
            i -= 1;
        }
        i
    }
}
