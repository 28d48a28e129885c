use crate::perm::{window_code, PatternSet, Permutation};

/// Lexicographic backtracking enumeration of `Av_n(ps)`.
///
/// Branches are cut as soon as the last `m` letters of the prefix form an
/// avoided pattern.
pub struct ClassIter {
    n: usize,
    m: usize,
    forbidden: Vec<usize>,
    word: Vec<u32>,
    used: Vec<bool>,
    // next candidate value to try at each depth
    cand: Vec<u32>,
    done: bool,
}

pub fn enumerate_class(n: usize, ps: &PatternSet) -> ClassIter {
    let mut forbidden: Vec<usize> = ps.iter().map(|p| p.lex_rank()).collect();
    forbidden.sort_unstable();
    ClassIter {
        n,
        m: ps.pattern_len().unwrap_or(usize::MAX),
        forbidden,
        word: Vec::with_capacity(n),
        used: vec![false; n + 1],
        cand: vec![1; n + 1],
        done: false,
    }
}

impl ClassIter {
    fn closes_forbidden_window(&self, next: u32) -> bool {
        let len = self.word.len() + 1;
        if self.m > len {
            return false;
        }
        let mut window = self.word[len - self.m..].to_vec();
        window.push(next);
        self.forbidden.binary_search(&window_code(&window)).is_ok()
    }

    fn pop(&mut self) {
        let x = self.word.pop().expect("pop on empty prefix");
        self.used[x as usize] = false;
    }
}

impl Iterator for ClassIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if self.n == 0 {
            self.done = true;
            return Some(Permutation::empty());
        }
        loop {
            let depth = self.word.len();
            if depth == self.n {
                let out = Permutation::from_word_unchecked(self.word.clone());
                self.pop();
                return Some(out);
            }
            let found = (self.cand[depth]..=self.n as u32)
                .find(|&c| !self.used[c as usize] && !self.closes_forbidden_window(c));
            match found {
                Some(c) => {
                    self.cand[depth] = c + 1;
                    self.cand[depth + 1] = 1;
                    self.used[c as usize] = true;
                    self.word.push(c);
                }
                None => {
                    if depth == 0 {
                        self.done = true;
                        return None;
                    }
                    self.cand[depth] = 1;
                    self.pop();
                }
            }
        }
    }
}
