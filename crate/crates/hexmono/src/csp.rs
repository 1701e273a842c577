//! Black-curve (R1) constraint propagation over a finite set of cells.
//!
//! Each cell carries a bitmask of still-possible orientations.  Propagation
//! is arc consistency over the shared edges between cells of the set:
//! an orientation survives only if every neighbouring domain contains a
//! matching orientation.

use crate::hexlattice::Hex;
use crate::prototile::PrototileTemplate;
use std::collections::HashMap;

/// Mask with all six orientations.
pub const ALL: u8 = 0b11_1111;

pub(crate) const NONE: u32 = u32::MAX;

/// Orientations contained in a mask, ascending.
pub fn orientations(mask: u8) -> impl Iterator<Item = u8> {
    (0..6u8).filter(move |o| mask >> o & 1 == 1)
}

/// A finite cell set with per-cell orientation domains.
#[derive(Clone, Debug)]
pub struct Domains {
    pub(crate) template: PrototileTemplate,
    pub(crate) cells: Vec<Hex>,
    pub(crate) index: HashMap<Hex, u32>,
    pub(crate) nbr: Vec<[u32; 6]>,
    pub(crate) dom: Vec<u8>,
}

impl Domains {
    /// Cells in the given order, every domain full.
    pub fn new(template: PrototileTemplate, cells: impl IntoIterator<Item = Hex>) -> Self {
        let mut list: Vec<Hex> = Vec::new();
        let mut index = HashMap::new();
        for c in cells {
            if !index.contains_key(&c) {
                index.insert(c, list.len() as u32);
                list.push(c);
            }
        }
        let nbr = list
            .iter()
            .map(|c| std::array::from_fn(|k| index.get(&c.neighbor(k as u8)).copied().unwrap_or(NONE)))
            .collect();
        let dom = vec![ALL; list.len()];
        Domains { template, cells: list, index, nbr, dom }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Hex] {
        &self.cells
    }

    pub fn domain(&self, c: Hex) -> Option<u8> {
        self.index.get(&c).map(|&i| self.dom[i as usize])
    }

    pub fn contains(&self, c: Hex) -> bool {
        self.index.contains_key(&c)
    }

    /// Intersects the domain of `c` with `mask`; returns false if it empties.
    /// Cells outside the set are ignored.
    pub fn restrict(&mut self, c: Hex, mask: u8) -> bool {
        match self.index.get(&c) {
            Some(&i) => {
                self.dom[i as usize] &= mask;
                self.dom[i as usize] != 0
            }
            None => true,
        }
    }

    /// Arc consistency from every cell.
    pub fn propagate_all(&mut self) -> bool {
        let queue: Vec<u32> = (0..self.cells.len() as u32).collect();
        self.propagate(queue)
    }

    /// Arc consistency starting from the given changed cells.
    pub fn propagate(&mut self, queue: Vec<u32>) -> bool {
        propagate_masks(&self.template, &self.nbr, &mut self.dom, queue).is_ok()
    }

    /// Up to `limit` complete assignments, in a deterministic order.
    pub fn solve(&self, limit: usize) -> Vec<Vec<(Hex, u8)>> {
        let mut out = Vec::new();
        let mut dom = self.dom.clone();
        if propagate_masks(&self.template, &self.nbr, &mut dom, (0..self.len() as u32).collect()).is_ok() {
            self.solve_rec(dom, limit, &mut out);
        }
        out
    }

    fn solve_rec(&self, dom: Vec<u8>, limit: usize, out: &mut Vec<Vec<(Hex, u8)>>) {
        if out.len() >= limit {
            return;
        }
        let Some(i) = most_constrained(&dom) else {
            out.push(self.cells.iter().zip(&dom).map(|(&c, &d)| (c, d.trailing_zeros() as u8)).collect());
            return;
        };
        for o in orientations(dom[i as usize]) {
            if out.len() >= limit {
                return;
            }
            let mut next = dom.clone();
            next[i as usize] = 1 << o;
            if propagate_masks(&self.template, &self.nbr, &mut next, vec![i]).is_ok() {
                self.solve_rec(next, limit, out);
            }
        }
    }
}

/// Arc consistency over raw domain masks.  On contradiction returns the
/// index of the cell whose domain emptied.
pub(crate) fn propagate_masks(
    template: &PrototileTemplate,
    nbr: &[[u32; 6]],
    dom: &mut [u8],
    mut queue: Vec<u32>,
) -> Result<(), u32> {
    if let Some(&i) = queue.iter().find(|&&i| dom[i as usize] == 0) {
        return Err(i);
    }
    while let Some(i) = queue.pop() {
        let d = dom[i as usize];
        for k in 0..6u8 {
            let j = nbr[i as usize][k as usize];
            if j == NONE {
                continue;
            }
            let mut allowed = 0u8;
            for o in orientations(d) {
                allowed |= template.r1_mask(o, k);
            }
            let old = dom[j as usize];
            let new = old & allowed;
            if new != old {
                dom[j as usize] = new;
                if new == 0 {
                    return Err(j);
                }
                queue.push(j);
            }
        }
    }
    Ok(())
}

/// Index of the undecided cell with the fewest options (ties: lowest index).
pub(crate) fn most_constrained(dom: &[u8]) -> Option<u32> {
    let mut best: Option<(u32, u32)> = None;
    for (i, &d) in dom.iter().enumerate() {
        let n = d.count_ones();
        if n > 1 && best.is_none_or(|(bn, _)| n < bn) {
            best = Some((n, i as u32));
            if n == 2 {
                break;
            }
        }
    }
    best.map(|(_, i)| i)
}
