//! Dead-configuration test for word-collecting searches.
//!
//! A configuration is dead when some nonterminal occurrence can never be
//! deleted, or when more than `max_word_len` terminal occurrences can never
//! be deleted. Both rule out reaching a collected word, so dropping dead
//! configurations leaves enumeration and membership results unchanged.
//!
//! Deletability is judged from the symbols that could ever become the
//! occurrence's left or right neighbour. For the left side these are the
//! symbols now to its left plus everything insertable at a site left of it,
//! closed under "a rule whose context anchor can be left of the occurrence
//! may put its body there"; the right side is symmetric.

use crate::model::ActionKind;

type Tok = u16;

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: Tok) -> bool {
        let (w, b) = (i as usize / 64, i as usize % 64);
        let was = self.0[w] >> b & 1 == 1;
        self.0[w] |= 1 << b;
        !was
    }

    fn has(&self, i: Tok) -> bool {
        self.0[i as usize / 64] >> (i as usize % 64) & 1 == 1
    }

    fn or(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= *b;
        }
    }
}

/// A way to delete one occurrence: the required neighbours, if any.
#[derive(Clone, Copy)]
struct Slot {
    left: Option<Tok>,
    right: Option<Tok>,
}

pub(crate) struct DeadCheck {
    n: usize,
    terminal: Vec<bool>,
    max_terminals: usize,
    /// Symbols that may appear anywhere.
    base: Bits,
    /// `reach[s]`: symbols that can end up next to the side of `s`'s occurrence.
    reach: Vec<Bits>,
    /// Insertions anchored directly before (left) or after (right) an occurrence.
    seed_left: Vec<Bits>,
    seed_right: Vec<Bits>,
    slots: Vec<Vec<Slot>>,
}

pub(crate) struct RuleView<'a> {
    pub kind: ActionKind,
    pub left: &'a [Tok],
    pub body: &'a [Tok],
    pub right: &'a [Tok],
}

impl DeadCheck {
    pub(crate) fn new<'a>(terminal: Vec<bool>, rules: impl IntoIterator<Item = RuleView<'a>>, max_terminals: usize) -> Self {
        let n = terminal.len();
        let rules: Vec<RuleView<'a>> = rules.into_iter().collect();
        // Premise of an insertion: last of u, else first of v, else none.
        let mut base = Bits::new(n);
        let mut by_premise: Vec<Vec<&[Tok]>> = vec![Vec::new(); n];
        let mut seed_left: Vec<Vec<&[Tok]>> = vec![Vec::new(); n];
        let mut seed_right: Vec<Vec<&[Tok]>> = vec![Vec::new(); n];
        let mut slots = vec![Vec::new(); n];
        for r in &rules {
            match r.kind {
                ActionKind::Insertion => match (r.left.last(), r.right.first()) {
                    (Some(&p), _) => {
                        by_premise[p as usize].push(r.body);
                        seed_right[p as usize].push(r.body);
                    }
                    (None, Some(&p)) => {
                        by_premise[p as usize].push(r.body);
                        seed_left[p as usize].push(r.body);
                    }
                    (None, None) => {
                        for &t in r.body {
                            base.set(t);
                        }
                    }
                },
                ActionKind::Deletion => {
                    for (k, &x) in r.body.iter().enumerate() {
                        let left = if k == 0 { r.left.last().copied() } else { Some(r.body[k - 1]) };
                        let right = if k + 1 == r.body.len() { r.right.first().copied() } else { Some(r.body[k + 1]) };
                        slots[x as usize].push(Slot { left, right });
                    }
                }
            }
        }
        // Symbols reachable from an anchor through insertions anchored on
        // earlier bodies, with base symbols acting as anchors everywhere.
        let close = |start: &mut Bits, by_premise: &Vec<Vec<&[Tok]>>| {
            let mut stack: Vec<Tok> = (0..n as Tok).filter(|&t| start.has(t)).collect();
            while let Some(s) = stack.pop() {
                for body in &by_premise[s as usize] {
                    for &t in *body {
                        if start.set(t) {
                            stack.push(t);
                        }
                    }
                }
            }
        };
        close(&mut base, &by_premise);
        let reach = (0..n)
            .map(|s| {
                let mut b = base.clone();
                b.set(s as Tok);
                close(&mut b, &by_premise);
                b
            })
            .collect();
        let seeded = |seeds: &Vec<Vec<&[Tok]>>| -> Vec<Bits> {
            seeds
                .iter()
                .map(|bodies| {
                    let mut b = base.clone();
                    for body in bodies {
                        for &t in *body {
                            b.set(t);
                        }
                    }
                    close(&mut b, &by_premise);
                    b
                })
                .collect()
        };
        let seed_left = seeded(&seed_left);
        let seed_right = seeded(&seed_right);
        DeadCheck { n, terminal, max_terminals, base, reach, seed_left, seed_right, slots }
    }

    fn deletable(&self, x: Tok, left: &Bits, right: &Bits) -> bool {
        self.slots[x as usize]
            .iter()
            .any(|s| s.left.is_none_or(|l| left.has(l)) && s.right.is_none_or(|r| right.has(r)))
    }

    pub(crate) fn is_dead(&self, w: &[Tok]) -> bool {
        if w.is_empty() {
            return false;
        }
        // suffix[i] = base ∪ reach of w[i..]
        let mut suffix = vec![self.base.clone(); w.len() + 1];
        for i in (0..w.len()).rev() {
            let mut b = suffix[i + 1].clone();
            b.or(&self.reach[w[i] as usize]);
            suffix[i] = b;
        }
        let mut prefix = self.base.clone();
        let mut stuck_terminals = 0;
        for (i, &x) in w.iter().enumerate() {
            let mut left = prefix.clone();
            left.or(&self.seed_left[x as usize]);
            let mut right = suffix[i + 1].clone();
            right.or(&self.seed_right[x as usize]);
            if !self.deletable(x, &left, &right) {
                if !self.terminal[x as usize] {
                    return true;
                }
                stuck_terminals += 1;
                if stuck_terminals > self.max_terminals {
                    return true;
                }
            }
            prefix.or(&self.reach[x as usize]);
        }
        debug_assert!(self.n == self.terminal.len());
        false
    }
}
