use crate::deployment::Cell;
use crate::geometry::Point;

use super::{NodeKind, SectorGrid};

/// A straight feeder from the hub along the sector bisector, with each cell
/// tapped off by a perpendicular drop.
///
/// The feeder runs as far as the farthest cell projection but never beyond
/// `max_wire_m`; cells projecting past its end drop from the end point.
/// Cells with a non-positive projection (behind the hub) connect straight to
/// the hub. A cell lying exactly on the feeder becomes a feeder node itself.
pub fn build_bus(cells: &[Cell], hub: Point, bisector_rad: f64, max_wire_m: f64) -> SectorGrid {
    let mut grid = SectorGrid::rooted_at(hub);
    let (ux, uy) = (bisector_rad.cos(), bisector_rad.sin());

    // (attach offset along the feeder, cell)
    let mut taps: Vec<(f64, &Cell)> = Vec::new();
    for cell in cells {
        let t = (cell.x_m - hub.x) * ux + (cell.y_m - hub.y) * uy;
        if t <= 0.0 {
            let n = grid.push_cell(cell);
            grid.edges.push((0, n));
        } else {
            taps.push((t, cell));
        }
    }
    if taps.is_empty() {
        return grid;
    }

    let bus_len = taps
        .iter()
        .map(|&(t, _)| t)
        .fold(0.0, f64::max)
        .min(max_wire_m);
    for tap in &mut taps {
        tap.0 = tap.0.min(bus_len);
    }
    taps.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.id.cmp(&b.1.id)));

    let mut prev = 0usize;
    let mut i = 0;
    while i < taps.len() {
        let offset = taps[i].0;
        let j = i + taps[i..].iter().take_while(|t| t.0 == offset).count();
        let at = Point::new(hub.x + offset * ux, hub.y + offset * uy);
        let group = &taps[i..j];

        // a cell sitting on the feeder doubles as the feeder node
        let on_bus = group.iter().position(|(_, c)| c.pos() == at);
        let bus_node = match on_bus {
            Some(k) => grid.push_cell(group[k].1),
            None => grid.push_node(at, NodeKind::Junction, None),
        };
        grid.edges.push((prev, bus_node));
        for (k, (_, cell)) in group.iter().enumerate() {
            if Some(k) != on_bus {
                let n = grid.push_cell(cell);
                grid.edges.push((bus_node, n));
            }
        }
        prev = bus_node;
        i = j;
    }
    grid
}
