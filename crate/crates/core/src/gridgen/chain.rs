use crate::deployment::Cell;
use crate::geometry::{segments_intersect, Point};

use super::SectorGrid;

/// True when segment `a`-`b` crosses any edge already in `grid`.
/// Zero-length segments (coincident points) never count as crossings.
fn crosses_existing(grid: &SectorGrid, a: Point, b: Point) -> bool {
    if a == b {
        return false;
    }
    grid.edges.iter().any(|&(u, v)| {
        let (p, q) = (grid.nodes[u].pos, grid.nodes[v].pos);
        p != q && segments_intersect(a, b, p, q).unwrap_or(false)
    })
}

/// Greedy chain with intersection-avoiding branches.
///
/// The tip starts at the hub and moves to the nearest unconnected cell
/// (ties by lower id). If the tip-to-cell segment would cross an existing
/// edge, the cell instead attaches to the nearest node (any node, not only
/// the tip) reachable without a crossing. When no such node exists it
/// attaches to the nearest node regardless and the grid records a forced
/// crossing. Either way the new cell becomes the tip.
pub fn build_chain(cells: &[Cell], hub: Point) -> SectorGrid {
    let mut grid = SectorGrid::rooted_at(hub);
    let mut pending: Vec<usize> = (0..cells.len()).collect();
    let mut tip = 0usize;

    while !pending.is_empty() {
        let tip_pos = grid.nodes[tip].pos;
        let (slot, _) = pending
            .iter()
            .enumerate()
            .min_by(|(_, &i), (_, &j)| {
                cells[i]
                    .pos()
                    .dist(tip_pos)
                    .total_cmp(&cells[j].pos().dist(tip_pos))
                    .then(cells[i].id.cmp(&cells[j].id))
            })
            .expect("pending is non-empty");
        let i = pending.remove(slot);
        let target = cells[i].pos();

        let parent = if !crosses_existing(&grid, tip_pos, target) {
            tip
        } else {
            let mut order: Vec<usize> = (0..grid.nodes.len()).collect();
            order.sort_by(|&u, &v| {
                grid.nodes[u]
                    .pos
                    .dist(target)
                    .total_cmp(&grid.nodes[v].pos.dist(target))
                    .then(u.cmp(&v))
            });
            match order
                .iter()
                .copied()
                .find(|&u| u != tip && !crosses_existing(&grid, grid.nodes[u].pos, target))
            {
                Some(u) => u,
                None => {
                    grid.forced_crossings += 1;
                    order[0]
                }
            }
        };

        let node = grid.push_cell(&cells[i]);
        grid.edges.push((parent, node));
        tip = node;
    }
    grid
}
