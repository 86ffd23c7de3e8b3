//! Placement of system, control and factory patches on the logical plane.
//!
//! Patches sit on a grid dilated by 1.5 along each axis: two patch rows
//! (columns) per three grid rows (columns), the third left as ancilla
//! corridor so every patch exposes one horizontal and one vertical edge.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ceil_log2, TermTable};
use crate::planner::HardwareSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellRole {
    System,
    Control,
    Corridor,
    Factory,
    Port,
    Free,
}

impl CellRole {
    pub fn routable(self) -> bool {
        matches!(self, CellRole::Corridor | CellRole::Free)
    }

    fn glyph(self) -> char {
        match self {
            CellRole::System => 'S',
            CellRole::Control => 'C',
            CellRole::Corridor => '.',
            CellRole::Factory => 'F',
            CellRole::Port => 'P',
            CellRole::Free => ' ',
        }
    }
}

pub type Cell = (usize, usize);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub top: usize,
    pub left: usize,
    pub height: usize,
    pub width: usize,
}

impl Region {
    pub fn area(&self) -> usize {
        self.height * self.width
    }

    pub fn contains(&self, (r, c): Cell) -> bool {
        r >= self.top && r < self.top + self.height && c >= self.left && c < self.left + self.width
    }
}

/// Qubit ids of one SELECT thread: its copy of the SELECT control, the
/// index register and the AND-ancilla ladder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreadRegisters {
    pub control: usize,
    pub index: Vec<usize>,
    pub ancilla: Vec<usize>,
}

/// Logical-qubit numbering shared by the floor plan and the SELECT program.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registers {
    pub n_system: usize,
    pub log_l: usize,
    pub threads: Vec<ThreadRegisters>,
}

impl Registers {
    pub fn new(n_system: usize, log_l: usize, b: usize) -> Self {
        let per = 2 * log_l + 1;
        let threads = (0..b)
            .map(|t| {
                let base = n_system + t * per;
                ThreadRegisters {
                    control: base,
                    index: (0..log_l).map(|k| base + 1 + k).collect(),
                    ancilla: (0..log_l).map(|k| base + 1 + log_l + k).collect(),
                }
            })
            .collect();
        Registers { n_system, log_l, threads }
    }

    pub fn for_table(table: &TermTable, b: usize) -> Self {
        Self::new(table.n_system, ceil_log2(table.count as u64) as usize, b)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_system + self.threads.len() * (2 * self.log_l + 1)
    }

    pub fn is_system(&self, q: usize) -> bool {
        q < self.n_system
    }
}

/// Row and column of system qubit `q` before dilation.
pub fn system_slot(table: &TermTable, q: usize) -> Cell {
    let k = (table.n_system / table.n_sites.max(1)).max(1);
    match table.extents.len() {
        2 => {
            let lx = table.extents[0];
            let (site, nu) = (q / k, q % k);
            (site / lx, (site % lx) * k + nu)
        }
        1 => (q % k, q / k),
        _ => {
            let side = (table.n_system as f64).sqrt().ceil().max(1.0) as usize;
            (q / side, q % side)
        }
    }
}

/// Grid offset of the u-th patch along a dilated axis.
pub fn dilate(u: usize) -> usize {
    1 + u + u / 2
}

/// Extent along a dilated axis holding `n` patches, with corridor on both ends.
fn dilated_extent(n: usize) -> usize {
    if n == 0 {
        1
    } else {
        dilate(n - 1) + 2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloorPlan {
    pub rows: usize,
    pub cols: usize,
    pub grid: Vec<CellRole>,
    pub placement: Vec<Cell>,
    pub ports: Vec<Cell>,
    pub factory_region: Region,
    pub control_region: Region,
    pub system_region: Region,
    pub registers: Registers,
}

impl FloorPlan {
    pub fn role(&self, (r, c): Cell) -> CellRole {
        self.grid[r * self.cols + c]
    }

    pub fn index(&self, (r, c): Cell) -> usize {
        r * self.cols + c
    }

    pub fn cell_of(&self, q: usize) -> Cell {
        self.placement[q]
    }

    /// In-grid 4-neighbours in lexicographic (row, column) order.
    pub fn neighbors(&self, (r, c): Cell) -> impl Iterator<Item = Cell> {
        let (rows, cols) = (self.rows, self.cols);
        let up = (r > 0).then(|| (r - 1, c));
        let left = (c > 0).then(|| (r, c - 1));
        let right = (c + 1 < cols).then_some((r, c + 1));
        let down = (r + 1 < rows).then_some((r + 1, c));
        [up, left, right, down].into_iter().flatten()
    }

    pub fn validate(&self, hw: &HardwareSpec) -> Result<()> {
        let mut seen = vec![false; self.grid.len()];
        for (q, &cell) in self.placement.iter().enumerate() {
            let i = self.index(cell);
            if seen[i] {
                return Err(Error::Invariant(format!("qubit {q} shares cell {cell:?}")));
            }
            seen[i] = true;
            if !matches!(self.role(cell), CellRole::System | CellRole::Control) {
                return Err(Error::Invariant(format!("qubit {q} placed on a {:?} cell", self.role(cell))));
            }
            let (r, c) = cell;
            let vertical = [r.checked_sub(1), (r + 1 < self.rows).then_some(r + 1)]
                .into_iter()
                .flatten()
                .any(|rr| self.role((rr, c)).routable());
            let horizontal = [c.checked_sub(1), (c + 1 < self.cols).then_some(c + 1)]
                .into_iter()
                .flatten()
                .any(|cc| self.role((r, cc)).routable());
            if !vertical || !horizontal {
                return Err(Error::Invariant(format!("qubit {q} at {cell:?} lacks corridor access")));
            }
        }
        if self.factory_region.area() < hw.n_factories * hw.factory_area {
            return Err(Error::Invariant("factory region smaller than n_F x A_F".into()));
        }
        for &p in &self.ports {
            if !self.neighbors(p).any(|n| self.role(n).routable()) {
                return Err(Error::Invariant(format!("factory port {p:?} is walled in")));
            }
        }
        Ok(())
    }

    pub fn to_ascii(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(self.role((r, c)).glyph());
            }
            let _ = writeln!(s);
        }
        s
    }
}

fn factory_shape(area: usize) -> (usize, usize) {
    let h = ((area as f64).sqrt().floor() as usize).max(1);
    (h, area.div_ceil(h).max(1))
}

pub fn build_floor_plan(table: &TermTable, hw: &HardwareSpec) -> Result<FloorPlan> {
    hw.validate()?;
    let b = hw.threads;
    let regs = Registers::for_table(table, b);
    let lg = regs.log_l;

    let (mut q_rows, mut q_cols) = (0, 0);
    for q in 0..table.n_system {
        let (r, c) = system_slot(table, q);
        q_rows = q_rows.max(r + 1);
        q_cols = q_cols.max(c + 1);
    }
    let sys_h = dilated_extent(q_rows);
    let sys_w = dilated_extent(q_cols);

    // Thread blocks are three columns wide: corridor, index, ancilla.
    let ctrl_w = 3 * b + 1;
    let ctrl_h = dilate(lg) + 1;
    let body_w = sys_w.max(ctrl_w);

    let (fh, fw) = factory_shape(hw.factory_area);
    let fact_w = fw * hw.n_factories;
    let cols = body_w.max(fact_w);
    let body_left = (cols - body_w) / 2;
    let fact_left = (cols - fact_w) / 2;

    let factory_region = Region { top: 0, left: fact_left, height: fh, width: fact_w };
    let control_region = Region { top: fh, left: body_left, height: ctrl_h, width: body_w };
    let system_region = Region { top: fh + ctrl_h, left: body_left, height: sys_h, width: body_w };
    let rows = fh + ctrl_h + sys_h;

    let mut grid = vec![CellRole::Free; rows * cols];
    let set = |grid: &mut Vec<CellRole>, (r, c): Cell, role| grid[r * cols + c] = role;

    for f in 0..hw.n_factories {
        for r in 0..fh {
            for c in 0..fw {
                set(&mut grid, (r, fact_left + f * fw + c), CellRole::Factory);
            }
        }
    }
    let ports: Vec<Cell> = (0..hw.n_factories).map(|f| (fh - 1, fact_left + f * fw + fw / 2)).collect();
    for &p in &ports {
        set(&mut grid, p, CellRole::Port);
    }

    for region in [&control_region, &system_region] {
        for r in 0..region.height {
            for c in 0..region.width {
                if r % 3 == 0 || c % 3 == 0 {
                    set(&mut grid, (region.top + r, region.left + c), CellRole::Corridor);
                }
            }
        }
    }

    let mut placement = vec![(0, 0); regs.n_qubits()];
    for (q, slot) in placement.iter_mut().enumerate().take(table.n_system) {
        let (r, c) = system_slot(table, q);
        let cell = (system_region.top + dilate(r), system_region.left + dilate(c));
        *slot = cell;
    }
    for (t, th) in regs.threads.iter().enumerate() {
        let offset = if ctrl_w <= sys_w { t * (sys_w - 1) / b / 3 * 3 } else { 3 * t };
        let left = control_region.left + offset;
        let top = control_region.top;
        placement[th.control] = (top + dilate(0), left + 1);
        for k in 0..lg {
            let row = top + dilate(k + 1);
            placement[th.index[k]] = (row, left + 1);
            placement[th.ancilla[k]] = (row, left + 2);
        }
    }
    for (q, &cell) in placement.iter().enumerate() {
        let role = if q < table.n_system { CellRole::System } else { CellRole::Control };
        set(&mut grid, cell, role);
    }

    let plan = FloorPlan {
        rows,
        cols,
        grid,
        placement,
        ports,
        factory_region,
        control_region,
        system_region,
        registers: regs,
    };
    plan.validate(hw)?;
    Ok(plan)
}
