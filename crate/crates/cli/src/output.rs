//! CSV writers. Floats use 17 significant digits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use surfdiff::bubble::BubbleLawRow;
use surfdiff::calculus::ResidualReport;
use surfdiff::solver::{ReportRow, SolverState};

pub struct Csv {
    out: BufWriter<File>,
    path: PathBuf,
}

impl Csv {
    pub fn create(dir: &Path, name: &str, header: &str) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(name);
        let mut out = BufWriter::new(File::create(&path)?);
        writeln!(out, "{header}")?;
        Ok(Self { out, path })
    }

    pub fn row(&mut self, fields: &[Cell]) -> std::io::Result<()> {
        let line: Vec<String> = fields.iter().map(Cell::render).collect();
        writeln!(self.out, "{}", line.join(","))
    }

    pub fn finish(mut self) -> std::io::Result<PathBuf> {
        self.out.flush()?;
        Ok(self.path)
    }
}

pub enum Cell<'a> {
    F(f64),
    I(usize),
    S(&'a str),
    B(bool),
}

impl Cell<'_> {
    fn render(&self) -> String {
        match self {
            Cell::F(v) => sci(*v),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.to_string(),
            Cell::B(b) => b.to_string(),
        }
    }
}

pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

pub const SNAPSHOT_HEADER: &str = "t,i,j,r,s,x1,x2,x3,u,sqrtG";
pub const RESIDUAL_HEADER: &str = "name,value,tolerance,pass,resolution";

/// Appends every cell of `state` to a snapshot file.
pub fn snapshot(csv: &mut Csv, state: &SolverState) -> std::io::Result<()> {
    let u = state.primitive();
    let g = &state.geometry;
    for i in 0..state.grid.nr {
        for j in 0..state.grid.ns {
            let k = state.grid.idx(i, j);
            let x = state.grid.center(i, j);
            let p = g.cell_position[k];
            csv.row(&[
                Cell::F(state.t),
                Cell::I(i),
                Cell::I(j),
                Cell::F(x[0]),
                Cell::F(x[1]),
                Cell::F(p.x),
                Cell::F(p.y),
                Cell::F(p.z),
                Cell::F(u.get(i, j)),
                Cell::F(g.cell_sqrt_g[k]),
            ])?;
        }
    }
    Ok(())
}

pub fn report_rows(csv: &mut Csv, rows: &[ReportRow]) -> std::io::Result<()> {
    for r in rows {
        csv.row(&[
            Cell::F(r.t),
            Cell::F(r.mass),
            Cell::F(r.energy),
            Cell::F(r.dissipation_cum),
            Cell::F(r.law_residual),
            Cell::F(r.min_u),
            Cell::F(r.max_u),
        ])?;
    }
    Ok(())
}

pub fn bubble_rows(csv: &mut Csv, rows: &[BubbleLawRow]) -> std::io::Result<()> {
    for r in rows {
        csv.row(&[
            Cell::F(r.t),
            Cell::F(r.mass_total),
            Cell::F(r.energy_total),
            Cell::F(r.dissipation_cum),
            Cell::F(r.mass_drift),
            Cell::F(r.energy_residual),
        ])?;
    }
    Ok(())
}

pub fn residual_rows(csv: &mut Csv, reports: &[ResidualReport]) -> std::io::Result<()> {
    for r in reports {
        let res = r.resolution.to_string();
        csv.row(&[Cell::S(&r.name), Cell::F(r.value), Cell::F(r.tolerance), Cell::B(r.pass), Cell::S(&res)])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = sci(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(sci(1.0), "1.0000000000000000e0");
    }
}
