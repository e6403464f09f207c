//! Human-readable alignment blocks.
//!
//! ```text
//! {"uid":"u1", "TER":50.00, "mTER":50.00, "cor":1,"sub":1, "ins":0, "del":0}
//!   REF  : A B
//!   HYP  : A C
//!   EDIT :   S
//! ```

use std::fmt::Write as _;

use terkit::metrics::Rate;
use terkit::{Alignment, OpKind};

pub const REF_PREFIX: &str = "  REF  : ";
pub const HYP_PREFIX: &str = "  HYP  : ";
pub const EDIT_PREFIX: &str = "  EDIT : ";

/// Placeholder shown on the side of an insertion or deletion that has no token.
pub const GAP: &str = "*";

fn rate(r: Option<Rate>) -> String {
    r.map_or_else(|| "null".to_owned(), Rate::percent)
}

/// The one-line record that heads each block. Rates are percentages with
/// two decimals; an undefined TER is `null`.
pub fn header_line(uid: &str, alignment: &Alignment, ter: Option<Rate>, mter: Rate) -> String {
    format!(
        "{{\"uid\":{}, \"TER\":{}, \"mTER\":{}, \"cor\":{},\"sub\":{}, \"ins\":{}, \"del\":{}}}",
        serde_json::Value::from(uid),
        rate(ter),
        mter.percent(),
        alignment.cor,
        alignment.sub,
        alignment.ins,
        alignment.del
    )
}

/// Header plus REF, HYP and EDIT rows. Each column is as wide as the longer
/// of its two tokens; trailing spaces are trimmed.
pub fn render_alignment(uid: &str, alignment: &Alignment, ter: Option<Rate>, mter: Rate) -> String {
    let mut rows = [
        REF_PREFIX.to_owned(),
        HYP_PREFIX.to_owned(),
        EDIT_PREFIX.to_owned(),
    ];
    for (i, op) in alignment.ops().iter().enumerate() {
        let r = op.ref_token().map_or(GAP, |t| t.as_str());
        let h = op.hyp_token().map_or(GAP, |t| t.as_str());
        let mark = match op.kind() {
            OpKind::Cor => "",
            OpKind::Sub => "S",
            OpKind::Ins => "I",
            OpKind::Del => "D",
        };
        let width = r.chars().count().max(h.chars().count());
        for (row, cell) in rows.iter_mut().zip([r, h, mark]) {
            if i > 0 {
                row.push(' ');
            }
            let _ = write!(row, "{cell:<width$}");
        }
    }
    let mut out = header_line(uid, alignment, ter, mter);
    for row in rows {
        out.push('\n');
        out.push_str(row.trim_end());
    }
    out.push('\n');
    out
}

/// Edit counts recovered from a rendered block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EditCounts {
    pub cor: usize,
    pub sub: usize,
    pub ins: usize,
    pub del: usize,
}

/// Re-derives counts from the EDIT row of a block produced by
/// [`render_alignment`]. The number of columns comes from the REF row,
/// where every column holds exactly one token or gap marker.
pub fn parse_edit_counts(block: &str) -> Option<EditCounts> {
    let row = |prefix: &str| {
        block.lines().find_map(|l| {
            l.strip_prefix(prefix.trim_end())
                .map(|rest| rest.strip_prefix(' ').unwrap_or(rest))
        })
    };
    let columns = row(REF_PREFIX)?.split_whitespace().count();
    let edit = row(EDIT_PREFIX)?;
    let mut counts = EditCounts::default();
    for c in edit.chars() {
        match c {
            'S' => counts.sub += 1,
            'I' => counts.ins += 1,
            'D' => counts.del += 1,
            ' ' => {}
            _ => return None,
        }
    }
    counts.cor = columns.checked_sub(counts.sub + counts.ins + counts.del)?;
    Some(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use terkit::metrics::{mter, ter};
    use terkit::{align_dp, tokenize};

    fn block(r: &str, h: &str) -> String {
        let a = align_dp(&tokenize(r), &tokenize(h));
        render_alignment("u1", &a, ter(&a).ok(), mter(&a))
    }

    #[test]
    fn figure_layout() {
        let r = "FOR OLDER KIDS THAT CAN BE THE SAME WE DO IT AS ADULTS";
        let h = "FOR OLDER KIDS THAT CAN BE THE SAME WAY WE DO IT AS ADULTS FOR MORE INFORMATION VISIT WWW DOT FEMA DOT GOV";
        let out = block(r, h);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(
            lines[0],
            r#"{"uid":"u1", "TER":76.92, "mTER":43.48, "cor":13,"sub":0, "ins":10, "del":0}"#
        );
        assert_eq!(
            lines[1],
            "  REF  : FOR OLDER KIDS THAT CAN BE THE SAME *   WE DO IT AS ADULTS *   *    *           *     *   *   *    *   *"
        );
        assert_eq!(
            lines[2],
            "  HYP  : FOR OLDER KIDS THAT CAN BE THE SAME WAY WE DO IT AS ADULTS FOR MORE INFORMATION VISIT WWW DOT FEMA DOT GOV"
        );
        assert_eq!(
            lines[3],
            "  EDIT :                                     I                      I   I    I           I     I   I   I    I   I"
        );
    }

    #[test]
    fn identical_sequences_have_blank_edit_row() {
        let out = block("a b c", "a b c");
        assert_eq!(out.lines().nth(3), Some("  EDIT :"));
    }

    #[test]
    fn deletion_shows_gap_in_hyp() {
        let out = block("a", "");
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[2], "  HYP  : *");
        assert_eq!(lines[3], "  EDIT : D");
    }

    #[test]
    fn undefined_ter_is_null() {
        let out = block("", "x");
        assert!(out.starts_with(r#"{"uid":"u1", "TER":null, "mTER":100.00,"#));
    }

    #[test]
    fn uid_is_escaped() {
        let a = align_dp(&tokenize("a"), &tokenize("a"));
        assert!(header_line("a\"b", &a, ter(&a).ok(), mter(&a)).starts_with(r#"{"uid":"a\"b","#));
    }

    #[test]
    fn counts_parse_back() {
        for (r, h) in [
            ("a b c", "a x c d"),
            ("", "x y"),
            ("a b", ""),
            ("", ""),
            ("longword b", "x longword"),
        ] {
            let a = align_dp(&tokenize(r), &tokenize(h));
            let c = parse_edit_counts(&render_alignment("u", &a, ter(&a).ok(), mter(&a))).unwrap();
            assert_eq!(
                (c.cor, c.sub, c.ins, c.del),
                (a.cor, a.sub, a.ins, a.del),
                "{r:?} / {h:?}"
            );
        }
    }
}
