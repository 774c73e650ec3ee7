#![allow(dead_code)]

use polaris_core::{Corpus, CorpusBuilder, PeriodSchedule, RawSubmission, Stance};

/// `(id, author, created_utc, parent)`; a `None` parent makes a post. The thread
/// root is found by following parents within the fixture.
pub type Row<'a> = (&'a str, &'a str, i64, Option<&'a str>, Option<Stance>);

pub fn corpus(rows: &[Row<'_>], periods: &[(i64, i64)]) -> Corpus {
    let root_of = |id: &str| {
        let mut id = id.to_string();
        while let Some(p) = rows.iter().find(|r| r.0 == id).and_then(|r| r.3) {
            id = p.to_string();
        }
        id
    };
    let mut b = CorpusBuilder::new();
    for r in rows {
        b.push(RawSubmission {
            id: r.0.into(),
            author: r.1.into(),
            created_utc: r.2,
            body: String::new(),
            link_id: r.3.map(|_| root_of(r.0)),
            parent_id: r.3.map(String::from),
        })
        .unwrap();
    }
    let schedule =
        PeriodSchedule::new(periods.iter().enumerate().map(|(k, &(s, e))| (format!("p{k}"), s, e))).unwrap();
    let c = b.finish().assign_periods(schedule);
    let stances = c.submissions().iter().map(|s| rows.iter().find(|r| r.0 == s.id).unwrap().4).collect();
    c.with_stances(stances)
}
