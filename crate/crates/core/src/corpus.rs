//! Submission records, thread structure and period assignment.
//!
//! A [`CorpusBuilder`] accepts format-agnostic [`RawSubmission`]s in input order,
//! rejects duplicates (first occurrence wins), resolves reply parents and repairs
//! structural damage. The resulting [`Corpus`] is read-only apart from the stance
//! slot and the period assignment, both of which are applied by value.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::period::PeriodSchedule;
use crate::stance::Stance;

/// Author strings that carry no stable identity.
pub const DELETED_AUTHORS: [&str; 2] = ["[deleted]", "[removed]"];

const NONE_IDX: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UserId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ThreadId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Post,
    Comment,
}

/// One input record with reddit-style id prefixes already stripped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSubmission {
    pub id: String,
    pub author: String,
    pub created_utc: i64,
    pub body: String,
    /// Thread root id; present iff the record is a comment.
    pub link_id: Option<String>,
    /// Direct parent id; present iff the record is a comment.
    pub parent_id: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submission {
    pub id: String,
    pub kind: Kind,
    pub thread: ThreadId,
    /// Parent id as it appeared in the input.
    pub parent_id: Option<String>,
    /// Resolved parent after repair. `None` for posts and for comments whose
    /// thread root is missing from the dump.
    pub parent: Option<u32>,
    /// `None` for deleted authors.
    pub author: Option<UserId>,
    pub created_utc: i64,
    pub body: String,
    pub stance: Option<Stance>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Malformed {
    EmptyId,
    /// Exactly one of `link_id` / `parent_id` was present.
    HalfComment,
    /// A comment naming itself as its thread root or parent.
    SelfReference,
}

/// Counters collected while building a corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub loaded: u64,
    pub malformed: u64,
    pub duplicates: u64,
    /// Comments whose parent was missing (or in another thread) and were
    /// re-attached to their thread root.
    pub dangling_repaired: u64,
    /// Comments whose parent chain looped; the loop is cut at the thread root.
    pub cycles_repaired: u64,
    /// Comments whose thread root post is absent from the dump.
    pub orphaned: u64,
    pub deleted_author: u64,
    /// First few duplicate ids, for logging.
    pub duplicate_examples: Vec<String>,
}

const MAX_EXAMPLES: usize = 20;

#[derive(Default)]
pub struct CorpusBuilder {
    raws: Vec<RawSubmission>,
    malformed: u64,
}

impl CorpusBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self { raws: Vec::with_capacity(n), malformed: 0 }
    }

    /// Record a line that failed to parse upstream.
    pub fn count_malformed(&mut self, n: u64) {
        self.malformed += n;
    }

    pub fn push(&mut self, raw: RawSubmission) -> Result<(), Malformed> {
        let outcome = validate(&raw);
        match outcome {
            Ok(()) => self.raws.push(raw),
            Err(_) => self.malformed += 1,
        }
        outcome
    }

    pub fn len(&self) -> usize {
        self.raws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raws.is_empty()
    }

    pub fn finish(self) -> Corpus {
        let mut report = IngestReport { malformed: self.malformed, ..IngestReport::default() };
        let mut raws = self.raws;

        // Duplicates: a stable sort keeps input order among equal ids.
        let mut order: Vec<u32> = (0..raws.len() as u32).collect();
        order.sort_by(|&a, &b| raws[a as usize].id.cmp(&raws[b as usize].id));
        let mut keep = vec![true; raws.len()];
        for w in order.windows(2) {
            if raws[w[0] as usize].id == raws[w[1] as usize].id {
                keep[w[1] as usize] = false;
                report.duplicates += 1;
                if report.duplicate_examples.len() < MAX_EXAMPLES {
                    report.duplicate_examples.push(raws[w[1] as usize].id.clone());
                }
            }
        }
        if report.duplicates > 0 {
            let mut i = 0;
            raws.retain(|_| {
                i += 1;
                keep[i - 1]
            });
        }
        report.loaded = raws.len() as u64;

        let by_id = sorted_by_id(&raws);
        let lookup = |id: &str| -> Option<u32> {
            by_id
                .binary_search_by(|&i| raws[i as usize].id.as_str().cmp(id))
                .ok()
                .map(|k| by_id[k])
        };

        // Interned authors, sorted for determinism.
        let mut users: Vec<&str> = raws
            .iter()
            .map(|r| r.author.as_str())
            .filter(|a| !is_deleted(a))
            .collect();
        users.sort_unstable();
        users.dedup();
        let mut threads: Vec<&str> = raws
            .iter()
            .map(|r| r.link_id.as_deref().unwrap_or(r.id.as_str()))
            .collect();
        threads.sort_unstable();
        threads.dedup();

        let thread_of: Vec<u32> = raws
            .iter()
            .map(|r| {
                let t = r.link_id.as_deref().unwrap_or(r.id.as_str());
                threads.binary_search(&t).expect("thread interned") as u32
            })
            .collect();
        let thread_roots: Vec<u32> = threads
            .iter()
            .map(|t| match lookup(t) {
                Some(i) if raws[i as usize].link_id.is_none() => i,
                _ => NONE_IDX,
            })
            .collect();

        let mut parent: Vec<u32> = vec![NONE_IDX; raws.len()];
        for (i, r) in raws.iter().enumerate() {
            let Some(pid) = r.parent_id.as_deref() else { continue };
            let root = thread_roots[thread_of[i] as usize];
            if root == NONE_IDX {
                report.orphaned += 1;
            }
            match lookup(pid) {
                Some(p) if thread_of[p as usize] == thread_of[i] && p as usize != i => parent[i] = p,
                _ => {
                    if root != NONE_IDX {
                        report.dangling_repaired += 1;
                    }
                    parent[i] = root;
                }
            }
        }
        report.cycles_repaired = break_cycles(&mut parent, &thread_of, &thread_roots);

        let user_ids: Vec<Option<UserId>> = raws
            .iter()
            .map(|r| {
                if is_deleted(&r.author) {
                    None
                } else {
                    Some(UserId(users.binary_search(&r.author.as_str()).expect("user interned") as u32))
                }
            })
            .collect();
        report.deleted_author = user_ids.iter().filter(|u| u.is_none()).count() as u64;

        let users: Vec<String> = users.into_iter().map(String::from).collect();
        let threads: Vec<String> = threads.into_iter().map(String::from).collect();

        let submissions: Vec<Submission> = raws
            .into_iter()
            .zip(user_ids)
            .enumerate()
            .map(|(i, (r, author))| Submission {
                kind: if r.link_id.is_some() { Kind::Comment } else { Kind::Post },
                id: r.id,
                thread: ThreadId(thread_of[i]),
                parent_id: r.parent_id,
                parent: (parent[i] != NONE_IDX).then_some(parent[i]),
                author,
                created_utc: r.created_utc,
                body: r.body,
                stance: None,
            })
            .collect();

        Corpus {
            submissions,
            users,
            threads,
            thread_roots: thread_roots.into_iter().map(|r| (r != NONE_IDX).then_some(r)).collect(),
            by_id,
            schedule: PeriodSchedule::empty(),
            period_of: Vec::new(),
            by_period: Vec::new(),
            report,
        }
    }
}

pub fn is_deleted(author: &str) -> bool {
    DELETED_AUTHORS.contains(&author)
}

fn validate(raw: &RawSubmission) -> Result<(), Malformed> {
    if raw.id.is_empty() {
        return Err(Malformed::EmptyId);
    }
    match (&raw.link_id, &raw.parent_id) {
        (None, None) => Ok(()),
        (Some(link), Some(parent)) => {
            if *link == raw.id || *parent == raw.id {
                Err(Malformed::SelfReference)
            } else {
                Ok(())
            }
        }
        _ => Err(Malformed::HalfComment),
    }
}

fn sorted_by_id(raws: &[RawSubmission]) -> Vec<u32> {
    let mut by_id: Vec<u32> = (0..raws.len() as u32).collect();
    by_id.sort_unstable_by(|&a, &b| raws[a as usize].id.cmp(&raws[b as usize].id));
    by_id
}

// Any parent chain that revisits a node is cut by pointing the node where the
// loop closes at its thread root (or nowhere if the root is itself in the loop).
fn break_cycles(parent: &mut [u32], thread_of: &[u32], thread_roots: &[u32]) -> u64 {
    const UNSEEN: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;
    let n = parent.len();
    let mut state = vec![UNSEEN; n];
    let mut path: Vec<u32> = Vec::new();
    let mut repaired = 0;
    for start in 0..n {
        if state[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut cur = start as u32;
        loop {
            match state[cur as usize] {
                DONE => break,
                ACTIVE => {
                    // `cur` closes a loop; detach the last node on the path.
                    let last = *path.last().expect("loop implies non-empty path");
                    let root = thread_roots[thread_of[last as usize] as usize];
                    parent[last as usize] = if root == last { NONE_IDX } else { root };
                    repaired += 1;
                    break;
                }
                _ => {
                    state[cur as usize] = ACTIVE;
                    path.push(cur);
                    let p = parent[cur as usize];
                    if p == NONE_IDX {
                        break;
                    }
                    cur = p;
                }
            }
        }
        for &v in &path {
            state[v as usize] = DONE;
        }
    }
    repaired
}

/// Per-period submission counts split by kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodCount {
    pub period: usize,
    pub posts: u64,
    pub comments: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DensityRow {
    pub bucket_start: i64,
    pub posts: u64,
    pub comments: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("bucket width must be positive, got {0}")]
    BadBucket(i64),
    #[error("submission {index} refers to out-of-range {what} {value}")]
    BadReference { index: usize, what: &'static str, value: u32 },
    #[error("duplicate submission id {0:?}")]
    DuplicateId(String),
}

/// An ingested corpus. Immutable apart from by-value period/stance application.
#[derive(Clone, Debug)]
pub struct Corpus {
    submissions: Vec<Submission>,
    users: Vec<String>,
    threads: Vec<String>,
    thread_roots: Vec<Option<u32>>,
    by_id: Vec<u32>,
    schedule: PeriodSchedule,
    period_of: Vec<Option<u32>>,
    by_period: Vec<Vec<u32>>,
    report: IngestReport,
}

/// Owned pieces of a corpus, used by storage layers.
#[derive(Clone, Debug)]
pub struct CorpusParts {
    pub submissions: Vec<Submission>,
    pub users: Vec<String>,
    pub threads: Vec<String>,
    pub schedule: PeriodSchedule,
    pub report: IngestReport,
}

impl Corpus {
    /// Reassemble a corpus from stored parts, re-deriving every index.
    pub fn from_parts(parts: CorpusParts) -> Result<Self, CorpusError> {
        let CorpusParts { submissions, users, threads, schedule, report } = parts;
        let n = submissions.len();
        let mut thread_roots = vec![None; threads.len()];
        for (i, s) in submissions.iter().enumerate() {
            if s.thread.0 as usize >= threads.len() {
                return Err(CorpusError::BadReference { index: i, what: "thread", value: s.thread.0 });
            }
            if let Some(u) = s.author {
                if u.0 as usize >= users.len() {
                    return Err(CorpusError::BadReference { index: i, what: "user", value: u.0 });
                }
            }
            if let Some(p) = s.parent {
                if p as usize >= n {
                    return Err(CorpusError::BadReference { index: i, what: "parent", value: p });
                }
            }
            if s.kind == Kind::Post {
                thread_roots[s.thread.0 as usize] = Some(i as u32);
            }
        }
        let mut by_id: Vec<u32> = (0..n as u32).collect();
        by_id.sort_unstable_by(|&a, &b| submissions[a as usize].id.cmp(&submissions[b as usize].id));
        for w in by_id.windows(2) {
            if submissions[w[0] as usize].id == submissions[w[1] as usize].id {
                return Err(CorpusError::DuplicateId(submissions[w[0] as usize].id.clone()));
            }
        }
        let corpus = Corpus {
            submissions,
            users,
            threads,
            thread_roots,
            by_id,
            schedule: PeriodSchedule::empty(),
            period_of: Vec::new(),
            by_period: Vec::new(),
            report,
        };
        Ok(corpus.assign_periods(schedule))
    }

    pub fn to_parts(&self) -> CorpusParts {
        CorpusParts {
            submissions: self.submissions.clone(),
            users: self.users.clone(),
            threads: self.threads.clone(),
            schedule: self.schedule.clone(),
            report: self.report.clone(),
        }
    }

    pub fn submissions(&self) -> &[Submission] {
        &self.submissions
    }

    pub fn len(&self) -> usize {
        self.submissions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.submissions.is_empty()
    }

    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn user_name(&self, user: UserId) -> &str {
        &self.users[user.0 as usize]
    }

    pub fn user_id(&self, name: &str) -> Option<UserId> {
        self.users.binary_search_by(|u| u.as_str().cmp(name)).ok().map(|i| UserId(i as u32))
    }

    pub fn threads(&self) -> &[String] {
        &self.threads
    }

    pub fn thread_root(&self, thread: ThreadId) -> Option<u32> {
        self.thread_roots[thread.0 as usize]
    }

    pub fn report(&self) -> &IngestReport {
        &self.report
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id
            .binary_search_by(|&i| self.submissions[i as usize].id.as_str().cmp(id))
            .ok()
            .map(|k| self.by_id[k] as usize)
    }

    pub fn get(&self, id: &str) -> Option<&Submission> {
        self.index_of(id).map(|i| &self.submissions[i])
    }

    pub fn schedule(&self) -> &PeriodSchedule {
        &self.schedule
    }

    pub fn n_periods(&self) -> usize {
        self.schedule.len()
    }

    /// Author of the parent submission of `index`, if both are resolvable.
    pub fn parent_author(&self, index: usize) -> Option<UserId> {
        self.submissions[index].parent.and_then(|p| self.submissions[p as usize].author)
    }

    /// Map every submission onto the schedule. Idempotent.
    pub fn assign_periods(mut self, schedule: PeriodSchedule) -> Self {
        let mut by_period: Vec<Vec<u32>> = vec![Vec::new(); schedule.len()];
        self.period_of = self
            .submissions
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let p = schedule.period_of(s.created_utc);
                if let Some(p) = p {
                    by_period[p].push(i as u32);
                }
                p.map(|p| p as u32)
            })
            .collect();
        self.by_period = by_period;
        self.schedule = schedule;
        self
    }

    pub fn period_of(&self, index: usize) -> Option<usize> {
        self.period_of.get(index).copied().flatten().map(|p| p as usize)
    }

    /// Indices of the submissions inside `period`, in corpus order.
    pub fn in_period(&self, period: usize) -> &[u32] {
        self.by_period.get(period).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn unassigned(&self) -> usize {
        self.submissions.len() - self.by_period.iter().map(Vec::len).sum::<usize>()
    }

    pub fn period_counts(&self) -> Vec<PeriodCount> {
        self.by_period
            .iter()
            .enumerate()
            .map(|(period, idx)| {
                let posts = idx.iter().filter(|&&i| self.submissions[i as usize].kind == Kind::Post).count() as u64;
                PeriodCount { period, posts, comments: idx.len() as u64 - posts }
            })
            .collect()
    }

    /// Replace stance slots. `stances` must have one entry per submission.
    pub fn with_stances(mut self, stances: Vec<Option<Stance>>) -> Self {
        assert_eq!(stances.len(), self.submissions.len(), "one stance slot per submission");
        for (s, st) in self.submissions.iter_mut().zip(stances) {
            s.stance = st;
        }
        self
    }

    /// Number of parent hops from `index` to a submission without a parent.
    pub fn depth(&self, index: usize) -> usize {
        let mut d = 0;
        let mut cur = index;
        while let Some(p) = self.submissions[cur].parent {
            cur = p as usize;
            d += 1;
        }
        d
    }
}

/// Count submissions per fixed-width time bucket.
///
/// Rows run contiguously from the first to the last non-empty bucket.
pub fn temporal_density(corpus: &Corpus, bucket: i64) -> Result<Vec<DensityRow>, CorpusError> {
    if bucket <= 0 {
        return Err(CorpusError::BadBucket(bucket));
    }
    let mut counts: BTreeMap<i64, (u64, u64)> = BTreeMap::new();
    for s in corpus.submissions() {
        let b = s.created_utc.div_euclid(bucket);
        let e = counts.entry(b).or_default();
        match s.kind {
            Kind::Post => e.0 += 1,
            Kind::Comment => e.1 += 1,
        }
    }
    let (Some(&first), Some(&last)) = (counts.keys().next(), counts.keys().next_back()) else {
        return Ok(Vec::new());
    };
    Ok((first..=last)
        .map(|b| {
            let (posts, comments) = counts.get(&b).copied().unwrap_or_default();
            DensityRow { bucket_start: b * bucket, posts, comments }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    pub(crate) fn post(id: &str, author: &str, t: i64) -> RawSubmission {
        RawSubmission {
            id: id.to_string(),
            author: author.to_string(),
            created_utc: t,
            body: String::new(),
            link_id: None,
            parent_id: None,
        }
    }

    pub(crate) fn reply(id: &str, author: &str, t: i64, thread: &str, parent: &str) -> RawSubmission {
        RawSubmission {
            link_id: Some(thread.to_string()),
            parent_id: Some(parent.to_string()),
            ..post(id, author, t)
        }
    }

    fn build(raws: Vec<RawSubmission>) -> Corpus {
        let mut b = CorpusBuilder::new();
        for r in raws {
            let _ = b.push(r);
        }
        b.finish()
    }

    #[test]
    fn minimal_tree() {
        let c = build(vec![post("p", "a", 0), reply("c1", "b", 1, "p", "p"), reply("c2", "c", 2, "p", "c1")]);
        assert_eq!(c.len(), 3);
        assert_eq!(c.threads().len(), 1);
        assert_eq!(c.get("c2").unwrap().parent, Some(c.index_of("c1").unwrap() as u32));
        assert_eq!(c.depth(c.index_of("c2").unwrap()), 2);
        assert_eq!(c.thread_root(ThreadId(0)), Some(0));
    }

    #[test]
    fn empty_builder() {
        let c = CorpusBuilder::new().finish();
        assert!(c.is_empty());
        assert_eq!(c.report().malformed, 0);
    }

    #[test]
    fn first_duplicate_wins() {
        let mut dup = post("p", "b", 99);
        dup.body = "second".into();
        let c = build(vec![post("p", "a", 0), dup, post("q", "a", 1)]);
        assert_eq!(c.len(), 2);
        assert_eq!(c.report().duplicates, 1);
        assert_eq!(c.get("p").unwrap().created_utc, 0);
        assert_eq!(c.report().duplicate_examples, vec!["p".to_string()]);
    }

    #[test]
    fn half_comment_is_malformed() {
        let mut b = CorpusBuilder::new();
        let mut r = post("x", "a", 0);
        r.parent_id = Some("p".into());
        assert_eq!(b.push(r), Err(Malformed::HalfComment));
        assert_eq!(b.push(reply("y", "a", 0, "y", "p")), Err(Malformed::SelfReference));
        assert_eq!(b.finish().report().malformed, 2);
    }

    #[test]
    fn dangling_parent_reattaches_to_root() {
        let c = build(vec![post("p", "a", 0), reply("c", "b", 1, "p", "gone")]);
        assert_eq!(c.get("c").unwrap().parent, Some(0));
        assert_eq!(c.get("c").unwrap().parent_id.as_deref(), Some("gone"));
        assert_eq!(c.report().dangling_repaired, 1);
    }

    #[test]
    fn parent_in_other_thread_is_dangling() {
        let c = build(vec![
            post("p", "a", 0),
            post("q", "a", 0),
            reply("c", "b", 1, "q", "q"),
            reply("d", "b", 1, "p", "c"),
        ]);
        assert_eq!(c.get("d").unwrap().parent, Some(c.index_of("p").unwrap() as u32));
    }

    #[test]
    fn missing_root_orphans() {
        let c = build(vec![reply("c", "b", 1, "gone", "gone"), reply("d", "b", 1, "gone", "c")]);
        assert_eq!(c.get("c").unwrap().parent, None);
        assert_eq!(c.get("d").unwrap().parent, Some(c.index_of("c").unwrap() as u32));
        assert_eq!(c.report().orphaned, 2);
    }

    #[test]
    fn cycles_are_cut() {
        let c = build(vec![post("p", "a", 0), reply("x", "b", 1, "p", "y"), reply("y", "c", 1, "p", "x")]);
        assert_eq!(c.report().cycles_repaired, 1);
        for i in 0..c.len() {
            assert!(c.depth(i) <= 2);
        }
    }

    #[test]
    fn deleted_authors_have_no_identity() {
        let c = build(vec![post("p", "[deleted]", 0), reply("c", "b", 1, "p", "p")]);
        assert_eq!(c.users(), &["b".to_string()]);
        assert_eq!(c.get("p").unwrap().author, None);
        assert_eq!(c.report().deleted_author, 1);
        assert_eq!(c.parent_author(1), None);
    }

    #[test]
    fn assignment_follows_half_open_rule() {
        let sched =
            PeriodSchedule::new(vec![("a".to_string(), 10, 20), ("b".to_string(), 20, 30)]).unwrap();
        let c = build(vec![post("s", "u", 10), post("e", "u", 20), post("before", "u", 5), post("after", "u", 30)])
            .assign_periods(sched.clone());
        assert_eq!(c.period_of(c.index_of("s").unwrap()), Some(0));
        assert_eq!(c.period_of(c.index_of("e").unwrap()), Some(1));
        assert_eq!(c.period_of(c.index_of("before").unwrap()), None);
        assert_eq!(c.unassigned(), 2);
        let again = c.clone().assign_periods(sched);
        assert_eq!(again.period_of, c.period_of);
        assert_eq!(again.by_period, c.by_period);
    }

    #[test]
    fn density_splits_by_kind() {
        let c = build(vec![post("p", "a", 3), reply("c", "b", 4, "p", "p"), reply("d", "b", 5, "p", "p")]);
        let rows = temporal_density(&c, 10).unwrap();
        assert_eq!(rows, vec![DensityRow { bucket_start: 0, posts: 1, comments: 2 }]);
        assert!(temporal_density(&CorpusBuilder::new().finish(), 10).unwrap().is_empty());
        assert_eq!(temporal_density(&c, 0), Err(CorpusError::BadBucket(0)));
    }

    #[test]
    fn density_matches_generated_daily_counts() {
        const DAY: i64 = 86_400;
        let per_day = [3u64, 0, 7, 1, 0, 0, 12];
        let mut raws = Vec::new();
        for (d, &n) in per_day.iter().enumerate() {
            for k in 0..n {
                raws.push(post(&alloc::format!("{d}-{k}"), "u", d as i64 * DAY + (k as i64 * 97) % DAY));
            }
        }
        let rows = temporal_density(&build(raws), DAY).unwrap();
        let got: Vec<u64> = rows.iter().map(|r| r.posts).collect();
        assert_eq!(got, per_day.to_vec());
    }

    #[test]
    fn parts_round_trip() {
        let sched = PeriodSchedule::new(vec![("a".to_string(), 0, 10)]).unwrap();
        let c = build(vec![post("p", "a", 0), reply("c", "b", 1, "p", "p")]).assign_periods(sched);
        let back = Corpus::from_parts(c.to_parts()).unwrap();
        assert_eq!(back.submissions(), c.submissions());
        assert_eq!(back.period_of, c.period_of);
        assert_eq!(back.thread_roots, c.thread_roots);
    }
}
