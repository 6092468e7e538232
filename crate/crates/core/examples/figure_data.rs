//! Writes the three threshold-curve tables to a directory (default: a
//! fresh temporary directory) and prints a few rows of each.

use std::path::PathBuf;

use ffcs::figures::{figure_table, FigureGrid, FigureKind};
use ffcs::Result;

fn main() -> Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ffcs-figures"));
    std::fs::create_dir_all(&dir).map_err(|source| ffcs::Error::Io { path: dir.clone(), source })?;
    for kind in [FigureKind::Fig2, FigureKind::Fig3, FigureKind::Fig4] {
        let table = figure_table(kind, &FigureGrid::default_for(kind))?;
        let path = dir.join(format!("{kind}.csv"));
        table.write(&path)?;
        println!("{} ({} rows, {} columns)", path.display(), table.rows.len(), table.header.len());
        for line in table.to_csv().lines().take(3) {
            println!("  {line}");
        }
    }
    Ok(())
}
