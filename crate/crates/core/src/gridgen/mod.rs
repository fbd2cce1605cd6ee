//! Power-line grid synthesis.
//!
//! Each sector is wired independently into a tree rooted at the hub by one of
//! the [`Topology`] rules; the per-sector trees are then merged into a single
//! [`PowerGrid`] that shares the hub node. Wire distances are path lengths
//! along that tree.

mod bus;
mod chain;
mod tree;

pub use bus::build_bus;
pub use chain::build_chain;
pub use tree::build_tree;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::config::Topology;
use crate::deployment::{Cell, CellDeployment};
use crate::error::{Result, SimError};
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Hub,
    CellTap,
    Junction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridNode {
    pub id: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub kind: NodeKind,
    pub cell_id: Option<usize>,
    /// Owning sector; `None` for the shared hub.
    pub sector: Option<usize>,
}

impl GridNode {
    pub fn pos(&self) -> Point {
        Point::new(self.x_m, self.y_m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEdge {
    pub a: usize,
    pub b: usize,
    pub length_m: f64,
    pub sector: usize,
}

/// Per-cell wiring outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellWire {
    pub cell_id: usize,
    pub node: usize,
    pub branch: usize,
    pub wire_distance_m: f64,
    pub served: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerGrid {
    pub topology: Topology,
    pub hub: usize,
    pub nodes: Vec<GridNode>,
    pub edges: Vec<GridEdge>,
    /// Sorted by `cell_id`.
    pub cells: Vec<CellWire>,
    pub n_branches: usize,
    /// Chain attachments that could not avoid crossing an existing edge.
    pub forced_crossings: usize,
}

/// One sector's wiring in local indices; node 0 is always the hub.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorGrid {
    pub nodes: Vec<SectorNode>,
    pub edges: Vec<(usize, usize)>,
    pub forced_crossings: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorNode {
    pub pos: Point,
    pub kind: NodeKind,
    pub cell_id: Option<usize>,
}

impl SectorGrid {
    pub(crate) fn rooted_at(hub: Point) -> Self {
        SectorGrid {
            nodes: vec![SectorNode {
                pos: hub,
                kind: NodeKind::Hub,
                cell_id: None,
            }],
            edges: Vec::new(),
            forced_crossings: 0,
        }
    }

    pub(crate) fn push_node(&mut self, pos: Point, kind: NodeKind, cell_id: Option<usize>) -> usize {
        self.nodes.push(SectorNode { pos, kind, cell_id });
        self.nodes.len() - 1
    }

    pub(crate) fn push_cell(&mut self, cell: &Cell) -> usize {
        self.push_node(cell.pos(), NodeKind::CellTap, Some(cell.id))
    }
}

/// Wire every sector of `deployment` with `topology`, then compute wire
/// distances. Served flags are left unset; see [`mark_served`].
pub fn build_grid(deployment: &CellDeployment, topology: Topology, max_wire_m: f64) -> PowerGrid {
    let n_sectors = deployment.n_sectors.max(1);
    let mut by_sector: Vec<Vec<Cell>> = vec![Vec::new(); n_sectors];
    for cell in &deployment.cells {
        by_sector[cell.sector].push(cell.clone());
    }
    let sectors = by_sector
        .iter()
        .enumerate()
        .map(|(s, cells)| {
            let g = match topology {
                Topology::Bus => build_bus(cells, deployment.hub, deployment.bisector_angle(s), max_wire_m),
                Topology::Tree => build_tree(cells, deployment.hub),
                Topology::Chain => build_chain(cells, deployment.hub),
            };
            (s, g)
        })
        .collect();
    PowerGrid::assemble(topology, deployment.hub, n_sectors, sectors)
}

impl PowerGrid {
    /// Merge per-sector trees into one grid sharing node 0 as the hub.
    pub fn assemble(
        topology: Topology,
        hub: Point,
        n_branches: usize,
        sectors: Vec<(usize, SectorGrid)>,
    ) -> PowerGrid {
        let mut nodes = vec![GridNode {
            id: 0,
            x_m: hub.x,
            y_m: hub.y,
            kind: NodeKind::Hub,
            cell_id: None,
            sector: None,
        }];
        let mut edges = Vec::new();
        let mut cells = Vec::new();
        let mut forced_crossings = 0;

        for (sector, sg) in sectors {
            forced_crossings += sg.forced_crossings;
            let mut global = vec![0usize; sg.nodes.len()];
            for (local, n) in sg.nodes.iter().enumerate().skip(1) {
                let id = nodes.len();
                global[local] = id;
                nodes.push(GridNode {
                    id,
                    x_m: n.pos.x,
                    y_m: n.pos.y,
                    kind: n.kind,
                    cell_id: n.cell_id,
                    sector: Some(sector),
                });
                if let Some(cell_id) = n.cell_id {
                    cells.push(CellWire {
                        cell_id,
                        node: id,
                        branch: sector,
                        wire_distance_m: f64::NAN,
                        served: false,
                    });
                }
            }
            for &(a, b) in &sg.edges {
                let (a, b) = (global[a], global[b]);
                edges.push(GridEdge {
                    a,
                    b,
                    length_m: nodes[a].pos().dist(nodes[b].pos()),
                    sector,
                });
            }
        }
        cells.sort_by_key(|c| c.cell_id);

        let mut grid = PowerGrid {
            topology,
            hub: 0,
            nodes,
            edges,
            cells,
            n_branches,
            forced_crossings,
        };
        let dist = grid.node_distances();
        for c in &mut grid.cells {
            c.wire_distance_m = dist[c.node];
        }
        grid
    }

    fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a].push((e.b, e.length_m));
            adj[e.b].push((e.a, e.length_m));
        }
        adj
    }

    /// Path length from the hub to every node, by traversal of the tree.
    /// Unreachable nodes get `f64::INFINITY`.
    pub fn node_distances(&self) -> Vec<f64> {
        let adj = self.adjacency();
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        let mut queue = VecDeque::from([self.hub]);
        dist[self.hub] = 0.0;
        while let Some(u) = queue.pop_front() {
            for &(v, w) in &adj[u] {
                if dist[v].is_infinite() {
                    dist[v] = dist[u] + w;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn cell(&self, cell_id: usize) -> Result<&CellWire> {
        self.cells
            .binary_search_by_key(&cell_id, |c| c.cell_id)
            .map(|i| &self.cells[i])
            .map_err(|_| SimError::CellNotFound(cell_id))
    }

    pub fn served_count(&self) -> usize {
        self.cells.iter().filter(|c| c.served).count()
    }

    pub fn branch_count(&self) -> usize {
        self.n_branches
    }

    /// Checks the structural contract: per-sector trees rooted at the hub,
    /// edge lengths consistent with coordinates, and wire distances no
    /// shorter than the straight line.
    pub fn check_invariants(&self) -> Result<()> {
        let hubs = self.nodes.iter().filter(|n| n.kind == NodeKind::Hub).count();
        if hubs != 1 {
            return Err(SimError::Invariant(format!("grid has {hubs} hub nodes")));
        }
        for e in &self.edges {
            if e.a == e.b {
                return Err(SimError::Invariant(format!("self-loop on node {}", e.a)));
            }
            let d = self.nodes[e.a].pos().dist(self.nodes[e.b].pos());
            if (e.length_m - d).abs() > 1e-9 * d.max(1.0) {
                return Err(SimError::Invariant(format!(
                    "edge {}-{} length {} != endpoint distance {d}",
                    e.a, e.b, e.length_m
                )));
            }
        }
        for s in 0..self.branch_count() {
            let n_nodes = 1 + self.nodes.iter().filter(|n| n.sector == Some(s)).count();
            let n_edges = self.edges.iter().filter(|e| e.sector == s).count();
            if n_edges + 1 != n_nodes {
                return Err(SimError::Invariant(format!(
                    "sector {s}: {n_edges} edges for {n_nodes} nodes"
                )));
            }
        }
        // one tree overall (edge count + connectivity) implies every sector
        // subgraph is connected
        let dist = self.node_distances();
        if let Some(n) = dist.iter().position(|d| d.is_infinite()) {
            return Err(SimError::Invariant(format!("node {n} unreachable from hub")));
        }
        let hub = self.nodes[self.hub].pos();
        for c in &self.cells {
            let straight = self.nodes[c.node].pos().dist(hub);
            if c.wire_distance_m < straight * (1.0 - 1e-9) - 1e-9 {
                return Err(SimError::Invariant(format!(
                    "cell {} wire distance {} below straight-line {straight}",
                    c.cell_id, c.wire_distance_m
                )));
            }
        }
        Ok(())
    }
}

/// Hub-to-cell wire length along the grid.
pub fn wire_distance(grid: &PowerGrid, cell_id: usize) -> Result<f64> {
    grid.cell(cell_id).map(|c| c.wire_distance_m)
}

/// Per branch, serve the nearest (by wire, ties by id) cells within
/// `max_wire_m`, at most `max_cells_per_branch` of them.
pub fn mark_served(grid: &mut PowerGrid, max_wire_m: f64, max_cells_per_branch: usize) {
    let n_branches = grid.branch_count();
    let mut per_branch: Vec<Vec<usize>> = vec![Vec::new(); n_branches];
    for (i, c) in grid.cells.iter_mut().enumerate() {
        c.served = false;
        per_branch[c.branch].push(i);
    }
    for idx in &mut per_branch {
        idx.sort_by(|&i, &j| {
            let (a, b) = (&grid.cells[i], &grid.cells[j]);
            a.wire_distance_m
                .total_cmp(&b.wire_distance_m)
                .then(a.cell_id.cmp(&b.cell_id))
        });
        let within = idx
            .iter()
            .take_while(|&&i| grid.cells[i].wire_distance_m <= max_wire_m)
            .take(max_cells_per_branch)
            .count();
        for &i in &idx[..within] {
            grid.cells[i].served = true;
        }
    }
}

/// Served fraction of cells, `None` when there are no cells.
pub fn reachability_fraction(grid: &PowerGrid) -> Option<f64> {
    if grid.cells.is_empty() {
        None
    } else {
        Some(grid.served_count() as f64 / grid.cells.len() as f64)
    }
}
