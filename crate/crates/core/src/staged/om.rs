//! Order-maintenance list: a doubly linked list whose nodes carry `u64` tags
//! increasing along the list, so comparison is a tag comparison. When an
//! insertion finds no free tag, the smallest enclosing aligned tag range
//! that is sparse enough is relabeled evenly.

use rustc_hash::FxHashMap;

pub type Elem = u128;

const HEAD: u32 = 0;
const TAIL: u32 = 1;

#[derive(Clone, Debug)]
struct Node {
    elem: Elem,
    tag: u64,
    prev: u32,
    next: u32,
}

#[derive(Clone, Debug)]
pub struct OmList {
    nodes: Vec<Node>,
    index: FxHashMap<Elem, u32>,
}

impl Default for OmList {
    fn default() -> Self {
        Self::new()
    }
}

impl OmList {
    pub fn new() -> Self {
        let nodes = vec![
            Node {
                elem: 0,
                tag: 0,
                prev: HEAD,
                next: TAIL,
            },
            Node {
                elem: 0,
                tag: u64::MAX,
                prev: HEAD,
                next: TAIL,
            },
        ];
        OmList {
            nodes,
            index: FxHashMap::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.index.contains_key(&x)
    }

    pub fn tag(&self, x: Elem) -> Option<u64> {
        self.index.get(&x).map(|&i| self.nodes[i as usize].tag)
    }

    /// `a ≺ b`, when both are present.
    pub fn less(&self, a: Elem, b: Elem) -> Option<bool> {
        Some(self.tag(a)? < self.tag(b)?)
    }

    pub fn first(&self) -> Option<Elem> {
        self.elem_at(self.nodes[HEAD as usize].next)
    }

    pub fn last(&self) -> Option<Elem> {
        self.elem_at(self.nodes[TAIL as usize].prev)
    }

    fn elem_at(&self, i: u32) -> Option<Elem> {
        (i != HEAD && i != TAIL).then(|| self.nodes[i as usize].elem)
    }

    pub fn next(&self, x: Elem) -> Option<Elem> {
        let i = *self.index.get(&x)?;
        self.elem_at(self.nodes[i as usize].next)
    }

    pub fn prev(&self, x: Elem) -> Option<Elem> {
        let i = *self.index.get(&x)?;
        self.elem_at(self.nodes[i as usize].prev)
    }

    pub fn push_back(&mut self, x: Elem) {
        let last = self.nodes[TAIL as usize].prev;
        self.insert_after_node(last, x);
    }

    /// Inserts `x` immediately after `anchor`. Panics if `anchor` is absent
    /// or `x` is already present.
    pub fn insert_after(&mut self, anchor: Elem, x: Elem) {
        let a = self.index[&anchor];
        self.insert_after_node(a, x);
    }

    pub fn insert_before(&mut self, anchor: Elem, x: Elem) {
        let a = self.index[&anchor];
        let p = self.nodes[a as usize].prev;
        self.insert_after_node(p, x);
    }

    fn insert_after_node(&mut self, a: u32, x: Elem) {
        assert!(!self.index.contains_key(&x), "element {x} inserted twice");
        let mut next = self.nodes[a as usize].next;
        if self.nodes[next as usize].tag - self.nodes[a as usize].tag < 2 {
            self.relabel_around(a);
            next = self.nodes[a as usize].next;
        }
        let lo = self.nodes[a as usize].tag;
        let hi = self.nodes[next as usize].tag;
        let tag = lo + (hi - lo) / 2;
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            elem: x,
            tag,
            prev: a,
            next,
        });
        self.nodes[a as usize].next = id;
        self.nodes[next as usize].prev = id;
        self.index.insert(x, id);
    }

    /// Relabels the smallest sparse aligned range around the gap after `a`.
    fn relabel_around(&mut self, a: u32) {
        let b = self.nodes[a as usize].next;
        let t = if a != HEAD {
            self.nodes[a as usize].tag
        } else {
            self.nodes[b as usize].tag
        };
        for bits in 1..=64u32 {
            let mask: u64 = if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            };
            let lo = (t & !mask).max(1);
            let hi = (t | mask).min(u64::MAX - 1);
            let mut left = Vec::new();
            let mut cur = a;
            while cur != HEAD && self.nodes[cur as usize].tag >= lo {
                left.push(cur);
                cur = self.nodes[cur as usize].prev;
            }
            let mut right = Vec::new();
            let mut cur = b;
            while cur != TAIL && self.nodes[cur as usize].tag <= hi {
                right.push(cur);
                cur = self.nodes[cur as usize].next;
            }
            let count = (left.len() + right.len()) as u64;
            let width = (hi - lo) as f64 + 1.0;
            if width / (count as f64 + 1.0) < 1.5f64.powi(bits as i32).max(3.0) {
                continue;
            }
            let gap = (hi - lo) / (count + 1);
            let mut tag = lo;
            for id in left.into_iter().rev().chain(right) {
                tag += gap;
                self.nodes[id as usize].tag = tag;
            }
            return;
        }
        panic!("order-maintenance tag space exhausted");
    }

    /// Elements in list order.
    pub fn iter(&self) -> OmIter<'_> {
        OmIter {
            list: self,
            cur: self.nodes[HEAD as usize].next,
        }
    }

    /// Elements strictly between `a` and `b` in list order (empty unless
    /// `a ≺ b`), stopping early once `cap` elements were collected.
    pub fn between(&self, a: Elem, b: Elem, cap: usize) -> Option<Vec<Elem>> {
        let ia = *self.index.get(&a)?;
        let ib = *self.index.get(&b)?;
        let mut out = Vec::new();
        if self.nodes[ia as usize].tag >= self.nodes[ib as usize].tag {
            return Some(out);
        }
        let mut cur = self.nodes[ia as usize].next;
        while cur != ib {
            if out.len() >= cap {
                return None;
            }
            out.push(self.nodes[cur as usize].elem);
            cur = self.nodes[cur as usize].next;
        }
        Some(out)
    }

    /// Tags strictly increase along the list and the index matches the links.
    pub fn is_consistent(&self) -> bool {
        let mut cur = self.nodes[HEAD as usize].next;
        let mut prev_tag = 0u64;
        let mut prev = HEAD;
        let mut seen = 0usize;
        while cur != TAIL {
            let n = &self.nodes[cur as usize];
            if n.tag <= prev_tag && prev != HEAD
                || n.prev != prev
                || self.index.get(&n.elem) != Some(&cur)
            {
                return false;
            }
            prev_tag = n.tag;
            prev = cur;
            cur = n.next;
            seen += 1;
        }
        seen == self.index.len()
    }
}

pub struct OmIter<'a> {
    list: &'a OmList,
    cur: u32,
}

impl Iterator for OmIter<'_> {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        if self.cur == TAIL {
            return None;
        }
        let n = &self.list.nodes[self.cur as usize];
        self.cur = n.next;
        Some(n.elem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn repeated_insertion_at_one_spot() {
        let mut l = OmList::new();
        l.push_back(0);
        l.push_back(1);
        for k in 2..20_000u128 {
            l.insert_before(1, k);
        }
        assert!(l.is_consistent());
        let v: Vec<Elem> = l.iter().collect();
        assert_eq!(v[0], 0);
        assert_eq!(*v.last().unwrap(), 1);
        assert!(v[1..v.len() - 1].windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn repeated_insertion_after_head_element() {
        let mut l = OmList::new();
        l.push_back(0);
        for k in 1..20_000u128 {
            l.insert_after(0, k);
        }
        assert!(l.is_consistent());
        assert_eq!(l.next(0), Some(19_999));
        assert_eq!(l.last(), Some(1));
    }

    proptest! {
        #[test]
        fn matches_vec_model(ops in proptest::collection::vec((0usize..1000, any::<bool>()), 1..400)) {
            let mut l = OmList::new();
            let mut model: Vec<Elem> = vec![0];
            l.push_back(0);
            for (k, (pick, after)) in ops.into_iter().enumerate() {
                let x = k as Elem + 1;
                let pos = pick % model.len();
                let anchor = model[pos];
                if after {
                    l.insert_after(anchor, x);
                    model.insert(pos + 1, x);
                } else {
                    l.insert_before(anchor, x);
                    model.insert(pos, x);
                }
            }
            prop_assert!(l.is_consistent());
            prop_assert_eq!(l.iter().collect::<Vec<_>>(), model.clone());
            for i in 0..model.len().min(30) {
                for j in 0..model.len().min(30) {
                    prop_assert_eq!(l.less(model[i], model[j]), Some(i < j));
                }
            }
        }
    }
}
