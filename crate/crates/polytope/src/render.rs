//! Text output: every display format of the analysis front end.
//!
//! The general conventions: result lines are single-space token streams;
//! matrices are announced by a `rows cols  caption` header and printed with
//! fixed-width right-aligned entries, points as columns; a reflexive
//! equation block omits the constant column since the normals are then the
//! vertices of the dual polytope.

use std::fmt::Write as _;

use crate::cws::Cws;
use crate::fiber::{FiberLevel, Fibration, IpSimplex, LatticeAction};
use crate::hodge::HodgeData;
use crate::hull::Hull;
use crate::lg::Spectrum;
use crate::mat::Mat;
use crate::num::Int;
use crate::point::PointList;

fn push_row(out: &mut String, vals: impl Iterator<Item = Int>, width: usize) {
    for v in vals {
        let _ = write!(out, "{v:>width$}");
    }
    out.push('\n');
}

/// `rows cols  caption` header plus the matrix entries.
pub fn matrix_block(caption: &str, m: &Mat, width: usize) -> String {
    let mut out = format!("{} {}  {}\n", m.rows, m.cols, caption);
    for i in 0..m.rows {
        push_row(&mut out, m.row(i).iter().copied(), width);
    }
    out
}

/// Points as the columns of a `dim x n` matrix block.
pub fn points_block(caption: &str, pts: &PointList, width: usize) -> String {
    let mut out = format!("{} {}  {}\n", pts.dim, pts.len(), caption);
    for i in 0..pts.dim {
        push_row(&mut out, pts.iter().map(|p| p[i]), width);
    }
    out
}

/// Facet equations.  Reflexive polytopes drop the constant column: the
/// normal rows are vertices of the dual.  Otherwise each row carries its
/// constant in a wider final column.
pub fn equations_block(hull: &Hull) -> String {
    let ne = hull.facets.len();
    let n = hull.dim;
    let mut out;
    if hull.is_reflexive() {
        out = format!("{ne} {n}  Vertices of P-dual <-> Equations of P\n");
        for f in &hull.facets {
            push_row(&mut out, f.normal.iter().copied(), 4);
        }
    } else {
        out = format!("{ne} {n}  Equations of P\n");
        for f in &hull.facets {
            let mut line = String::new();
            for v in &f.normal {
                let _ = write!(line, "{v:>4}");
            }
            let _ = write!(line, "{:>6}", f.c);
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

/// Input echo of a weight system: blocks joined by two spaces, quotient
/// suffixes appended.
pub fn cws_echo(cws: &Cws) -> String {
    let mut parts = Vec::with_capacity(cws.rows.len());
    for r in &cws.rows {
        let mut s = r.d.to_string();
        for w in &r.w {
            let _ = write!(s, " {w}");
        }
        parts.push(s);
    }
    let mut out = parts.join("  ");
    for q in &cws.quotients {
        let _ = write!(out, " /Z{}:", q.m);
        for a in &q.a {
            let _ = write!(out, " {a}");
        }
    }
    out
}

/// Spectrum-mode echo: weights first, the degree last as `d=d`.
pub fn lg_echo(cws: &Cws) -> String {
    let r = &cws.rows[0];
    let mut out = String::new();
    for (i, w) in r.w.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{w}");
    }
    let _ = write!(out, " {}=d", r.d);
    out
}

/// Hodge display tokens for the general-output line.
pub fn hodge_tokens(h: &HodgeData) -> String {
    match h {
        HodgeData::K3 { pic, cor } => format!("Pic:{pic} Cor:{cor}"),
        HodgeData::Cy3 { h11, h21, chi } => format!("H:{h11},{h21} [{chi}]"),
        HodgeData::Cy4 {
            h11, h12, h13, chi, ..
        } => format!("H:{h11},{h12},{h13} [{chi}]"),
    }
}

/// The `V:` tokens of a spectrum computed on the orbifold side, same layout
/// as the geometric Hodge display.
pub fn vafa_tokens(spec: &Spectrum) -> String {
    let v = spec.v_numbers();
    let nums: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("V:{} [{}]", nums.join(","), spec.chi)
}

/// The `LG: H0:... H1:... Hn:...` grid for an integral charge outside the
/// threefold/fourfold display range.
pub fn lg_grid(spec: &Spectrum) -> String {
    let mut out = String::from("LG:");
    for p in 0..=spec.dim {
        let row: Vec<String> = spec.display_row(p).iter().map(|x| x.to_string()).collect();
        let _ = write!(out, " H{p}:{}", row.join(","));
    }
    out
}

/// Reference points as columns, optionally with the origin appended as the
/// final column (the full dual point list includes it; simplices never use
/// it).
pub fn refs_block(caption: &str, refs: &PointList, with_origin: bool) -> String {
    let cols = refs.len() + usize::from(with_origin);
    let mut out = format!("{} {}  {}\n", refs.dim, cols, caption);
    for i in 0..refs.dim {
        let mut line = String::new();
        for p in refs.iter() {
            let _ = write!(line, "{:>5}", p[i]);
        }
        if with_origin {
            let _ = write!(line, "{:>5}", 0);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Dashed separator under a reference block: five columns per reference
/// point, `pad` spaces, then the label.  Vertex sections use a pad of 3,
/// point sections (whose blocks carry the extra origin column) use 4.
pub fn separator(n_refs: usize, pad: usize, label: &str) -> String {
    format!("{}{}{}\n", "-".repeat(5 * n_refs), " ".repeat(pad), label)
}

/// One simplex row: the weight of every reference point, the degree, the
/// codimension, and any lattice quotient actions.
pub fn simplex_row(sx: &IpSimplex, n_refs: usize, actions: &[LatticeAction]) -> String {
    let mut out = String::new();
    for i in 0..n_refs {
        let _ = write!(out, "{:>5}", sx.weight_of(i));
    }
    let _ = write!(out, "{:>5}=d  codim={}", sx.d, sx.codim);
    for a in actions {
        out.push_str(&action_suffix(a));
    }
    out.push('\n');
    out
}

pub fn action_suffix(a: &LatticeAction) -> String {
    let mut out = format!(" /Z{}:", a.order);
    for r in &a.residues {
        let _ = write!(out, " {r}");
    }
    out
}

/// Membership markers of one fiber over the reference points, followed by
/// the codimension and the fiber statistics.
pub fn marker_row(lv: &FiberLevel, n_refs: usize) -> String {
    let mut out = String::new();
    for i in 0..n_refs {
        let mark = if lv.members.contains(&i) { "v" } else { "_" };
        let _ = write!(out, "{mark:>5}");
    }
    let s = &lv.stats;
    let _ = write!(
        out,
        "  cd={}  m:{} {} n:{} {}",
        lv.codim, s.m_points, s.m_vertices, s.n_points, s.n_vertices
    );
    out.push('\n');
    out
}

/// Concatenated reference indices, the order the record matrix presents its
/// columns in, counted from zero.
pub fn perm_string(fb: &Fibration) -> String {
    let mut out = String::new();
    for &i in &fb.perm {
        let _ = write!(out, "{i}");
    }
    out
}

fn stats_tokens(lv: &FiberLevel, dim: usize) -> String {
    let s = &lv.stats;
    let letter = match dim - lv.codim {
        2 => "E",
        3 => "K",
        _ => "",
    };
    format!(
        "{}m:{} {} n:{} {}",
        letter, s.m_points, s.m_vertices, s.n_points, s.n_vertices
    )
}

/// A fibration record: per-level fiber statistics (innermost first, letters
/// keyed by fiber dimension for nested records), the ambient point counts,
/// and the presentation permutation, above the adapted coordinate matrix.
pub fn fibration_record(
    fb: &Fibration,
    adapted: &Mat,
    m_stats: (usize, usize),
    n_stats: (usize, usize),
) -> String {
    let dim = adapted.rows;
    let levels: Vec<String> = if fb.levels.len() == 1 {
        let s = &fb.inner().stats;
        vec![format!(
            "m:{} {} n:{} {}",
            s.m_points, s.m_vertices, s.n_points, s.n_vertices
        )]
    } else {
        fb.levels.iter().map(|lv| stats_tokens(lv, dim)).collect()
    };
    let mut out = format!(
        "{} {}  {}  M:{} {} N:{} {}  p={}\n",
        adapted.rows,
        adapted.cols,
        levels.join("  "),
        m_stats.0,
        m_stats.1,
        n_stats.0,
        n_stats.1,
        perm_string(fb)
    );
    for i in 0..adapted.rows {
        push_row(&mut out, adapted.row(i).iter().copied(), 5);
    }
    out
}

/// Store entry as a plain coordinate block: `dim nv` then unpadded rows.
pub fn store_ascii_block(verts: &PointList) -> String {
    let mut out = format!("{} {}\n", verts.dim, verts.len());
    for i in 0..verts.dim {
        let row: Vec<String> = verts.iter().map(|p| p[i].to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
