/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Dense labels `0..k` in order of first appearance.
    pub(crate) fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut map = vec![usize::MAX; n];
        let mut out = Vec::with_capacity(n);
        let mut k = 0;
        for i in 0..n {
            let r = self.find(i);
            if map[r] == usize::MAX {
                map[r] = k;
                k += 1;
            }
            out.push(map[r]);
        }
        (out, k)
    }
}
