use crate::deployment::Cell;
use crate::geometry::Point;

use super::SectorGrid;

/// Nearest-connected accretion from the hub: repeatedly connect the
/// unconnected cell closest to any already-connected node, by a straight
/// edge to that node. Equal distances go to the lower cell id; among equally
/// near connected nodes the earliest connected one wins.
pub fn build_tree(cells: &[Cell], hub: Point) -> SectorGrid {
    let mut grid = SectorGrid::rooted_at(hub);

    // best[i] = (distance to connected set, local node it would attach to)
    let mut best: Vec<(f64, usize)> = cells.iter().map(|c| (c.pos().dist(hub), 0)).collect();
    let mut pending: Vec<usize> = (0..cells.len()).collect();

    while !pending.is_empty() {
        let (slot, _) = pending
            .iter()
            .enumerate()
            .min_by(|(_, &i), (_, &j)| {
                best[i].0
                    .total_cmp(&best[j].0)
                    .then(cells[i].id.cmp(&cells[j].id))
            })
            .expect("pending is non-empty");
        let i = pending.swap_remove(slot);
        let node = grid.push_cell(&cells[i]);
        grid.edges.push((best[i].1, node));

        let p = cells[i].pos();
        for &j in &pending {
            let d = cells[j].pos().dist(p);
            if d < best[j].0 {
                best[j] = (d, node);
            }
        }
    }
    grid
}
