//! Permutation enumeration with signs.

/// All permutations of `0..n` in lexicographic order, each paired with its
/// sign (`+1` or `-1`).
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Permutations {
            next: Some((0..n).collect()),
        }
    }
}

/// Sign of a permutation given as an image vector.
pub fn sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

impl Iterator for Permutations {
    type Item = (Vec<usize>, i32);

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        // standard next-permutation step
        let n = nxt.len();
        if n > 1 {
            let mut i = n - 1;
            while i > 0 && nxt[i - 1] >= nxt[i] {
                i -= 1;
            }
            if i > 0 {
                let mut j = n - 1;
                while nxt[j] <= nxt[i - 1] {
                    j -= 1;
                }
                nxt.swap(i - 1, j);
                nxt[i..].reverse();
                self.next = Some(nxt);
            }
        }
        let s = sign(&cur);
        Some((cur, s))
    }
}
