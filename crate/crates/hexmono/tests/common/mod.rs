//! Brute-force oracles shared by the exhaustive tests.

use hexmono::engine::{is_directly_constructible, replay};
use hexmono::hexlattice::Hex;
use hexmono::search::{extend_all, replay_witness, SearchConfig, SearchStatus};
use hexmono::{Patch, PrototileTemplate};
use std::collections::{HashMap, HashSet};

/// Redelmeier enumeration of edge-connected cell sets whose smallest cell
/// is the origin, each cell given every orientation that `choices` allows
/// against the tiles already chosen.  Every (cell set, orientations) pair
/// is visited exactly once.
pub fn enumerate(
    max: usize,
    choices: &dyn Fn(&[(Hex, u8)], Hex) -> Vec<u8>,
    visit: &mut dyn FnMut(&[(Hex, u8)]),
) {
    fn rec(
        untried: &mut Vec<Hex>,
        tiles: &mut Vec<(Hex, u8)>,
        marked: &mut HashSet<Hex>,
        max: usize,
        choices: &dyn Fn(&[(Hex, u8)], Hex) -> Vec<u8>,
        visit: &mut dyn FnMut(&[(Hex, u8)]),
    ) {
        while let Some(c) = untried.pop() {
            let added: Vec<Hex> = (0..6)
                .map(|k| c.neighbor(k))
                .filter(|&n| n > Hex::ORIGIN && marked.insert(n))
                .collect();
            for o in choices(tiles, c) {
                tiles.push((c, o));
                visit(tiles);
                if tiles.len() < max {
                    let mut next = untried.clone();
                    next.extend(&added);
                    rec(&mut next, tiles, marked, max, choices, visit);
                }
                tiles.pop();
            }
            for n in added {
                marked.remove(&n);
            }
        }
    }
    let mut marked = HashSet::from([Hex::ORIGIN]);
    rec(&mut vec![Hex::ORIGIN], &mut Vec::new(), &mut marked, max, choices, visit);
}

/// Orientations for `c` whose black curves match every chosen neighbour;
/// the seed at the origin is fixed to orientation 0.
pub fn r1_choices(t: PrototileTemplate) -> impl Fn(&[(Hex, u8)], Hex) -> Vec<u8> {
    move |tiles, c| {
        if c == Hex::ORIGIN {
            return vec![0];
        }
        (0..6u8)
            .filter(|&o| {
                tiles.iter().all(|&(d, o2)| match c.direction_to(d) {
                    Some(k) => t.r1_compatible(o, k, o2),
                    None => true,
                })
            })
            .collect()
    }
}

/// Brute force: is there an order adding one tile at a time in which every
/// step is legal?  Legality is spelled out from the rules: the first tile
/// is free; later tiles need a placed neighbour, matching curves on every
/// shared edge, and a tree contact with some placed neighbour.
pub fn brute_force_constructible(t: &PrototileTemplate, tiles: &[(Hex, u8)]) -> bool {
    let n = tiles.len();
    // Pairwise relations as bit masks over tile indices.
    let mut adjacent = [0u32; 32];
    let mut clash = [0u32; 32];
    let mut linked = [0u32; 32];
    for (i, &(c, o)) in tiles.iter().enumerate() {
        for (j, &(d, o2)) in tiles.iter().enumerate() {
            if let Some(k) = c.direction_to(d) {
                adjacent[i] |= 1 << j;
                if !t.r1_compatible(o, k, o2) {
                    clash[i] |= 1 << j;
                }
                if t.r2_linked(o, k, o2) {
                    linked[i] |= 1 << j;
                }
            }
        }
    }
    let legal = |i: usize, set: u32| -> bool {
        set == 0 || (adjacent[i] & set != 0 && clash[i] & set == 0 && linked[i] & set != 0)
    };
    let full = (1u32 << n) - 1;
    let mut seen = vec![false; 1 << n];
    let mut stack = vec![0u32];
    seen[0] = true;
    while let Some(set) = stack.pop() {
        if set == full {
            return true;
        }
        for i in 0..n {
            let next = set | (1 << i);
            if next != set && !seen[next as usize] && legal(i, set) {
                seen[next as usize] = true;
                stack.push(next);
            }
        }
    }
    false
}

/// Naive windowed growth: explores every legal placement sequence from the
/// seed, memoising visited fillings, until the region is full.  Cells
/// outside the region stand for an already-grown surrounding: they count
/// as neighbours, and a tree contact into them anchors the new tile.
pub fn naive_extendable(t: &PrototileTemplate, seed: &[(Hex, u8)], region: &[Hex]) -> bool {
    let index: HashMap<Hex, usize> = region.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    const EMPTY: u8 = 6;
    let mut start = vec![EMPTY; region.len()];
    for &(c, o) in seed {
        start[index[&c]] = o;
    }
    let legal = |state: &[u8], i: usize, o: u8| -> bool {
        let c = region[i];
        let mut neighbour = false;
        let mut anchored = false;
        for k in 0..6u8 {
            let n = c.neighbor(k);
            match index.get(&n) {
                Some(&j) if state[j] != EMPTY => {
                    neighbour = true;
                    if !t.r1_compatible(o, k, state[j]) {
                        return false;
                    }
                    anchored |= t.r2_linked(o, k, state[j]);
                }
                Some(_) => {}
                None => {
                    neighbour = true;
                    anchored |= t.has_contact(o, k);
                }
            }
        }
        neighbour && anchored
    };
    let mut seen: HashSet<Vec<u8>> = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    while let Some(state) = stack.pop() {
        if state.iter().all(|&o| o != EMPTY) {
            return true;
        }
        for i in 0..region.len() {
            if state[i] != EMPTY {
                continue;
            }
            for o in 0..6u8 {
                if legal(&state, i, o) {
                    let mut next = state.clone();
                    next[i] = o;
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
        }
    }
    false
}

/// Tallies of a constructibility sweep, indexed by patch size.
#[derive(Debug, Default)]
pub struct ConstructibilitySweep {
    pub patches: Vec<usize>,
    pub constructible: Vec<usize>,
}

/// Compares the engine's constructibility test with order enumeration on
/// every R1-consistent patch of at most `max` tiles whose smallest cell is
/// the seed (origin, orientation 0).  Returns the first disagreement.
pub fn constructibility_sweep(max: usize) -> Result<ConstructibilitySweep, String> {
    let t = PrototileTemplate::shipped();
    let mut out = ConstructibilitySweep { patches: vec![0; max + 1], constructible: vec![0; max + 1] };
    let mut failure: Option<String> = None;
    enumerate(max, &r1_choices(t), &mut |tiles| {
        if failure.is_some() {
            return;
        }
        let p = Patch::from_tiles(t, tiles.iter().copied()).expect("enumerated tiles are distinct");
        let engine = is_directly_constructible(&p);
        let brute = brute_force_constructible(&t, tiles);
        out.patches[tiles.len()] += 1;
        if engine.constructible != brute || !engine.r1_consistent {
            failure = Some(format!("engine {} vs brute force {brute} on {tiles:?}", engine.constructible));
        } else if brute {
            out.constructible[tiles.len()] += 1;
            if replay(t, &engine.witness).as_ref() != Ok(&p) {
                failure = Some(format!("witness does not replay on {tiles:?}"));
            }
        }
    });
    failure.map_or(Ok(out), Err)
}

/// Tallies of a bounded-search sweep.
#[derive(Debug, Default)]
pub struct SearchSweep {
    pub searches: usize,
    pub extendable: usize,
    pub refuted: usize,
}

/// Compares `extend_all` with naive sequence enumeration.
///
/// Two families of cases, all regions of at most `max` cells:
/// - a single seed tile at the origin, each orientation, in every
///   edge-connected region whose smallest cell is the origin;
/// - every R1-consistent seed of two to four tiles (smallest cell the
///   origin, orientation 0), in the seed plus every set of at most
///   `max_extra` of its boundary cells;
/// - every R1-consistent seed of at most `max_seed` tiles with a pocket
///   (an empty cell with three or more seed neighbours), in the seed plus
///   its pockets.  Pockets are where the rules can run out of options.
pub fn search_sweep(max: usize, max_extra: usize, max_seed: usize) -> Result<SearchSweep, String> {
    let t = PrototileTemplate::shipped();
    let cfg = SearchConfig::default();
    let mut cases: Vec<(Vec<(Hex, u8)>, Vec<Hex>)> = Vec::new();
    let mut regions: Vec<Vec<Hex>> = Vec::new();
    enumerate(max, &|_, _| vec![0], &mut |cells| regions.push(cells.iter().map(|&(c, _)| c).collect()));
    for region in regions {
        for o in 0..6u8 {
            cases.push((vec![(Hex::ORIGIN, o)], region.clone()));
        }
    }
    let mut seeds: Vec<Vec<(Hex, u8)>> = Vec::new();
    enumerate(4.min(max), &r1_choices(t), &mut |tiles| {
        if tiles.len() >= 2 {
            seeds.push(tiles.to_vec());
        }
    });
    for seed in seeds {
        let p = Patch::from_tiles(t, seed.iter().copied()).expect("enumerated tiles are distinct");
        let frontier = p.frontier_cells();
        let room = max.saturating_sub(seed.len()).min(max_extra);
        for extra in subsets(&frontier, room) {
            let mut region: Vec<Hex> = seed.iter().map(|&(c, _)| c).collect();
            region.extend(extra);
            cases.push((seed.clone(), region));
        }
    }
    enumerate(max_seed.min(max - 1), &r1_choices(t), &mut |tiles| {
        let cells: HashSet<Hex> = tiles.iter().map(|&(c, _)| c).collect();
        let mut pockets: Vec<Hex> = tiles
            .iter()
            .flat_map(|&(c, _)| (0..6).map(move |k| c.neighbor(k)))
            .filter(|n| !cells.contains(n))
            .filter(|n| (0..6).filter(|&k| cells.contains(&n.neighbor(k))).count() >= 3)
            .collect();
        pockets.sort();
        pockets.dedup();
        if !pockets.is_empty() && tiles.len() + pockets.len() <= max {
            let mut region: Vec<Hex> = tiles.iter().map(|&(c, _)| c).collect();
            region.extend(pockets);
            cases.push((tiles.to_vec(), region));
        }
    });
    let mut out = SearchSweep::default();
    for (seed, region) in cases {
        let p = Patch::from_tiles(t, seed.iter().copied()).expect("seeds are distinct cells");
        let set: HashSet<Hex> = region.iter().copied().collect();
        let v = extend_all(&p, &set, &cfg).map_err(|e| e.to_string())?;
        let naive = naive_extendable(&t, &seed, &region);
        let agree = match v.status {
            SearchStatus::Extendable => naive,
            SearchStatus::Refuted => !naive,
            SearchStatus::Unknown => false,
        };
        if !agree {
            return Err(format!("search {} vs naive {naive}: seed {seed:?} region {region:?}", v.status.as_str()));
        }
        if let Some(w) = &v.witness {
            if !replay_witness(&p, &set, w) {
                return Err(format!("witness does not replay: seed {seed:?} region {region:?}"));
            }
            out.extendable += 1;
        } else {
            out.refuted += 1;
        }
        out.searches += 1;
    }
    Ok(out)
}

/// All subsets of `items` with at most `k` elements.
fn subsets(items: &[Hex], k: usize) -> Vec<Vec<Hex>> {
    let mut out = vec![Vec::new()];
    for &x in items {
        let grown: Vec<Vec<Hex>> =
            out.iter().filter(|s| s.len() < k).map(|s| s.iter().copied().chain([x]).collect()).collect();
        out.extend(grown);
    }
    out
}
