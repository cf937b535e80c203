//! Static SVG strips of order prefixes.

use std::fmt::Write;

use cohepow_core::clocked::left;
use cohepow_core::order::{Components, ComputableOrder, PrefixDump};
use cohepow_core::staged::{Elem, StagedOrder};

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f",
];
const CELL: u32 = 22;
const PER_ROW: usize = 32;

/// One plotted element: its code and the group that picks its fill.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub code: u64,
    pub group: u64,
}

/// Groups for a dumped prefix: colors or insertion stages of a staged copy,
/// summands of a sum, outer coordinates of a product, otherwise one group.
pub fn cells(
    order: &dyn ComputableOrder,
    staged: Option<&StagedOrder>,
    dump: &PrefixDump,
) -> Vec<Cell> {
    dump.elements
        .iter()
        .map(|&code| {
            let group = match (staged, order.components()) {
                (Some(s), _) => s
                    .color(code as Elem)
                    .or_else(|| s.stage_added(code as Elem))
                    .unwrap_or(0),
                (None, Some(Components::Sum(_) | Components::Product(_))) => left(code),
                _ => 0,
            };
            Cell { code, group }
        })
        .collect()
}

/// Cells left to right in order, wrapped into rows, with a bar under every
/// maximal run of one group.
pub fn prefix_svg(title: &str, cells: &[Cell]) -> String {
    let rows = cells.len().div_ceil(PER_ROW).max(1);
    let width = PER_ROW as u32 * CELL + 20;
    let height = rows as u32 * (CELL + 14) + 40;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="8">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="10" y="16" font-size="12">{}</text>"#,
        escape(title)
    );
    for (i, c) in cells.iter().enumerate() {
        let (row, col) = (i / PER_ROW, i % PER_ROW);
        let x = 10 + col as u32 * CELL;
        let y = 28 + row as u32 * (CELL + 14);
        let fill = PALETTE[(c.group % PALETTE.len() as u64) as usize];
        let _ = writeln!(
            s,
            r#"<rect x="{x}" y="{y}" width="{}" height="{}" fill="{fill}"><title>{} (group {})</title></rect>"#,
            CELL - 2,
            CELL - 2,
            c.code,
            c.group
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" fill="white">{}</text>"#,
            x + CELL / 2 - 1,
            y + CELL / 2 + 2,
            c.code
        );
        let starts_run = i == 0 || cells[i - 1].group != c.group || col == 0;
        if starts_run {
            let run = cells[i..]
                .iter()
                .take(PER_ROW - col)
                .take_while(|d| d.group == c.group)
                .count() as u32;
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{}" width="{}" height="3" fill="{fill}"/>"#,
                y + CELL + 2,
                run * CELL - 2
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_bar_per_run() {
        let cells: Vec<Cell> = [0, 0, 1, 1, 1, 0]
            .iter()
            .enumerate()
            .map(|(i, &g)| Cell {
                code: i as u64,
                group: g,
            })
            .collect();
        let svg = prefix_svg("a<b", &cells);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("a&lt;b"));
        assert_eq!(svg.matches(r#"height="3""#).count(), 3);
        assert_eq!(svg.matches("<title>").count(), 6);
    }
}
