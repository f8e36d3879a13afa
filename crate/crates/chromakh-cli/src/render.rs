//! Table rendering, mirroring the paper's layout: chromatic tables have
//! i ascending across and j descending down; Khovanov tables have p
//! ascending across and q descending down. Cells in `bold` are marked
//! with an asterisk.

use chromakh::homcore::BigradedGroups;
use chromakh::khovanov::CorrespondenceReport;
use serde_json::json;

pub fn chromatic_table(h: &BigradedGroups, bold: &[(i32, i32)]) -> String {
    grid(h, bold, "i", "j")
}

pub fn khovanov_table(h: &BigradedGroups, bold: &[(i32, i32)]) -> String {
    grid(h, bold, "p", "q")
}

fn grid(h: &BigradedGroups, bold: &[(i32, i32)], ikey: &str, jkey: &str) -> String {
    if h.is_empty() {
        return "(trivial)\n".to_string();
    }
    let is: Vec<i32> = {
        let mut v: Vec<i32> = h.iter().map(|(&(i, _), _)| i).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let js: Vec<i32> = {
        let mut v: Vec<i32> = h.iter().map(|(&(_, j), _)| j).collect();
        v.sort_unstable();
        v.dedup();
        v.reverse();
        v
    };
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut header: Vec<String> = vec![format!("{}\\{}", jkey, ikey)];
    header.extend(is.iter().map(|i| i.to_string()));
    cells.push(header);
    for &j in &js {
        let mut row = vec![j.to_string()];
        for &i in &is {
            let g = h.get(i, j);
            if g.is_trivial() {
                row.push(String::new());
            } else {
                let mark = if bold.contains(&(i, j)) { "*" } else { "" };
                row.push(format!("{}{}", g.render(), mark));
            }
        }
        cells.push(row);
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        for (c, cell) in row.iter().enumerate() {
            out.push_str(&format!(" {:>width$}", cell, width = widths[c]));
            if c == 0 {
                out.push_str(" |");
            }
        }
        out.push('\n');
    }
    out
}

pub fn correspondence_text(rep: &CorrespondenceReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "correspondence: v={} girth={} c+={} c-={}\n",
        rep.v, rep.girth, rep.c_plus, rep.c_minus
    ));
    if rep.vacuous {
        out.push_str("G+ is a forest: the correspondence is vacuous\n");
        return out;
    }
    if rep.offset != (0, 0) {
        out.push_str(&format!(
            "NOTE: best alignment found at global offset {:?} instead of the nominal shift\n",
            rep.offset
        ));
    }
    for c in &rep.compared {
        out.push_str(&format!(
            "  H^({},{}) = {:<14} Kh^({},{}) = {:<14} {}\n",
            c.i,
            c.j,
            c.chromatic.render(),
            c.p,
            c.q,
            c.khovanov.render(),
            if c.full_match {
                "match"
            } else if c.torsion_match && c.i == rep.girth as i32 {
                "torsion match"
            } else {
                "MISMATCH"
            }
        ));
    }
    out.push_str(&format!(
        "groups match for i < girth: {}; torsion matches at i = girth: {}\n",
        rep.groups_match, rep.torsion_match_at_girth
    ));
    out
}

pub fn correspondence_json(rep: &CorrespondenceReport) -> serde_json::Value {
    json!({
        "v": rep.v,
        "girth": rep.girth,
        "c_plus": rep.c_plus,
        "c_minus": rep.c_minus,
        "vacuous": rep.vacuous,
        "offset": [rep.offset.0, rep.offset.1],
        "groups_match": rep.groups_match,
        "torsion_match_at_girth": rep.torsion_match_at_girth,
        "compared": rep.compared.iter().map(|c| json!({
            "i": c.i, "j": c.j, "p": c.p, "q": c.q,
            "chromatic": c.chromatic.render(),
            "khovanov": c.khovanov.render(),
            "full_match": c.full_match,
            "torsion_match": c.torsion_match,
        })).collect::<Vec<_>>(),
    })
}
