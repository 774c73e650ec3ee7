//! Named half-open time intervals and the validated schedule that orders them.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// A political period `[start_utc, end_utc)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub index: usize,
    pub name: String,
    pub start_utc: i64,
    pub end_utc: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PeriodError {
    #[error("period {name:?} has end_utc {end} <= start_utc {start}")]
    EmptyInterval { name: String, start: i64, end: i64 },
    #[error("periods {first:?} and {second:?} overlap")]
    Overlap { first: String, second: String },
    #[error("too many periods ({0}); at most {max} are supported", max = u32::MAX)]
    TooMany(usize),
}

/// Sorted, pairwise-disjoint list of periods.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PeriodSchedule {
    periods: Vec<Period>,
}

impl PeriodSchedule {
    /// Validate `(name, start, end)` triples in any order.
    ///
    /// The result is sorted by start time and re-indexed from zero.
    pub fn new<I>(entries: I) -> Result<Self, PeriodError>
    where
        I: IntoIterator<Item = (String, i64, i64)>,
    {
        let mut periods: Vec<Period> = entries
            .into_iter()
            .map(|(name, start_utc, end_utc)| Period { index: 0, name, start_utc, end_utc })
            .collect();
        if periods.len() > u32::MAX as usize {
            return Err(PeriodError::TooMany(periods.len()));
        }
        for p in &periods {
            if p.end_utc <= p.start_utc {
                return Err(PeriodError::EmptyInterval {
                    name: p.name.clone(),
                    start: p.start_utc,
                    end: p.end_utc,
                });
            }
        }
        periods.sort_by_key(|p| (p.start_utc, p.end_utc));
        for w in periods.windows(2) {
            if w[1].start_utc < w[0].end_utc {
                return Err(PeriodError::Overlap { first: w[0].name.clone(), second: w[1].name.clone() });
            }
        }
        for (i, p) in periods.iter_mut().enumerate() {
            p.index = i;
        }
        Ok(Self { periods })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn periods(&self) -> &[Period] {
        &self.periods
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Period> {
        self.periods.get(index)
    }

    /// Index of the period containing `ts`, if any.
    pub fn period_of(&self, ts: i64) -> Option<usize> {
        // last period whose start is <= ts
        let k = self.periods.partition_point(|p| p.start_utc <= ts);
        if k == 0 {
            return None;
        }
        let p = &self.periods[k - 1];
        (ts < p.end_utc).then_some(k - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn sched(v: &[(&str, i64, i64)]) -> Result<PeriodSchedule, PeriodError> {
        PeriodSchedule::new(v.iter().map(|(n, s, e)| (n.to_string(), *s, *e)))
    }

    #[test]
    fn out_of_order_input_is_sorted() {
        let s = sched(&[("b", 10, 20), ("a", 0, 10)]).unwrap();
        let names: Vec<_> = s.periods().iter().map(|p| (p.index, p.name.as_str())).collect();
        assert_eq!(names, vec![(0, "a"), (1, "b")]);
    }

    #[test]
    fn overlap_names_both_periods() {
        let err = sched(&[("first", 0, 10), ("second", 5, 15)]).unwrap_err();
        assert_eq!(err, PeriodError::Overlap { first: "first".into(), second: "second".into() });
        let msg = err.to_string();
        assert!(msg.contains("first") && msg.contains("second"));
    }

    #[test]
    fn empty_interval_rejected() {
        assert!(matches!(sched(&[("x", 5, 5)]), Err(PeriodError::EmptyInterval { .. })));
        assert!(matches!(sched(&[("x", 6, 5)]), Err(PeriodError::EmptyInterval { .. })));
    }

    #[test]
    fn shared_boundary_belongs_to_later_period() {
        let s = sched(&[("a", 0, 10), ("b", 10, 20), ("c", 25, 30)]).unwrap();
        assert_eq!(s.period_of(0), Some(0));
        assert_eq!(s.period_of(9), Some(0));
        assert_eq!(s.period_of(10), Some(1));
        assert_eq!(s.period_of(20), None);
        assert_eq!(s.period_of(22), None);
        assert_eq!(s.period_of(25), Some(2));
        assert_eq!(s.period_of(-1), None);
        assert_eq!(s.period_of(30), None);
    }

    #[test]
    fn twenty_seven_contiguous_periods() {
        // 2015-11-01 .. 2021-02-01, split into 27 contiguous phases.
        let start = 1_446_336_000i64;
        let end = 1_612_137_600i64;
        let step = (end - start) / 27;
        let entries: Vec<_> = (0..27)
            .map(|i| {
                let s = start + i * step;
                let e = if i == 26 { end } else { s + step };
                (alloc::format!("P{i}"), s, e)
            })
            .collect();
        let s = PeriodSchedule::new(entries).unwrap();
        assert_eq!(s.len(), 27);
        for k in 1..27 {
            let t = s.periods()[k].start_utc;
            assert_eq!(s.period_of(t), Some(k));
            assert_eq!(s.period_of(t - 1), Some(k - 1));
        }
    }
}
