//! Symbolic aggregation over extracted attribute records: counting,
//! extremum, full sort, bounded top-k, and id-set algebra. All functions
//! are pure and deterministic; ties break by ascending entity id.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The value extracted for one entity: a number with an optional unit, or
/// free text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RecordValue {
    Text(String),
    Number { value: f64, unit: Option<String> },
}

impl RecordValue {
    pub fn number(value: f64) -> Self {
        RecordValue::Number { value, unit: None }
    }

    pub fn number_with_unit(value: f64, unit: &str) -> Self {
        RecordValue::Number {
            value,
            unit: Some(unit.to_string()),
        }
    }
}

/// One extracted fact: entity, attribute, value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeRecord {
    pub entity_id: String,
    pub entity_label: String,
    pub attribute: String,
    pub value: RecordValue,
}

impl AttributeRecord {
    pub fn numeric(id: &str, label: &str, attribute: &str, value: f64) -> Self {
        AttributeRecord {
            entity_id: id.to_string(),
            entity_label: label.to_string(),
            attribute: attribute.to_string(),
            value: RecordValue::number(value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortOrder {
    Asc,
    Desc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetOp {
    Intersection,
    Union,
}

/// How to collapse multiple records for the same entity before ranking.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DedupPolicy {
    /// Keep the largest value seen for the entity.
    #[default]
    MaxValue,
    /// Keep the smallest value seen for the entity.
    MinValue,
    /// Keep the first record seen for the entity.
    FirstSeen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregationKind {
    Count,
    Min,
    Max,
    Sort,
    TopK,
}

/// One entity with its ranking value, as placed in an ordered result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub entity_id: String,
    pub entity_label: String,
    pub value: f64,
}

/// Outcome of one aggregation tool call. `count_value` is set for counts,
/// `ranked` for the ordered tools; `answer_text` is the canonical rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregationResult {
    pub kind: AggregationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_value: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranked: Option<Vec<RankedEntry>>,
    pub answer_text: String,
}

#[derive(Debug, Error, PartialEq)]
pub enum ToolError {
    #[error("no records to aggregate")]
    EmptyInput,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("record for {entity_id} has non-numeric {attribute:?}")]
    NonNumeric {
        entity_id: String,
        attribute: String,
    },
    #[error("unit mismatch on {attribute:?}: {left} vs {right} (entity {entity_id})")]
    UnitMismatch {
        entity_id: String,
        attribute: String,
        left: String,
        right: String,
    },
    #[error("no sets to combine")]
    NoSets,
}

/// Renders a number with the fewest digits that round-trip: integral values
/// print without a decimal point.
pub fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        let mut s = format!("{v}");
        if let Some(stripped) = s.strip_suffix(".0") {
            s = stripped.to_string();
        }
        s
    }
}

/// Counts distinct entities. Duplicate `entity_id`s are counted once.
pub fn count_tool(records: &[AttributeRecord]) -> AggregationResult {
    let distinct: BTreeSet<&str> = records.iter().map(|r| r.entity_id.as_str()).collect();
    let n = distinct.len() as u64;
    AggregationResult {
        kind: AggregationKind::Count,
        count_value: Some(n),
        ranked: None,
        answer_text: n.to_string(),
    }
}

/// Collapses duplicate entities into one `RankedEntry` each, per the given
/// policy, validating that every record is numeric and units agree.
/// Entries come back in ascending entity-id order.
pub fn dedupe(
    records: &[AttributeRecord],
    policy: DedupPolicy,
) -> Result<Vec<RankedEntry>, ToolError> {
    let mut unit: Option<&Option<String>> = None;
    let mut best: BTreeMap<&str, (&str, f64)> = BTreeMap::new();
    for rec in records {
        let RecordValue::Number { value, unit: u } = &rec.value else {
            return Err(ToolError::NonNumeric {
                entity_id: rec.entity_id.clone(),
                attribute: rec.attribute.clone(),
            });
        };
        match unit {
            None => unit = Some(u),
            Some(first) if first != u => {
                let show = |x: &Option<String>| {
                    x.clone().unwrap_or_else(|| "(none)".to_string())
                };
                return Err(ToolError::UnitMismatch {
                    entity_id: rec.entity_id.clone(),
                    attribute: rec.attribute.clone(),
                    left: show(first),
                    right: show(u),
                });
            }
            Some(_) => {}
        }
        match best.get_mut(rec.entity_id.as_str()) {
            None => {
                best.insert(&rec.entity_id, (&rec.entity_label, *value));
            }
            Some(slot) => {
                let replace = match policy {
                    DedupPolicy::MaxValue => *value > slot.1,
                    DedupPolicy::MinValue => *value < slot.1,
                    DedupPolicy::FirstSeen => false,
                };
                if replace {
                    *slot = (&rec.entity_label, *value);
                }
            }
        }
    }
    Ok(best
        .into_iter()
        .map(|(id, (label, value))| RankedEntry {
            entity_id: id.to_string(),
            entity_label: label.to_string(),
            value,
        })
        .collect())
}

fn compare_for(order: SortOrder) -> impl Fn(&RankedEntry, &RankedEntry) -> Ordering {
    move |a, b| {
        let by_value = match order {
            SortOrder::Desc => b.value.partial_cmp(&a.value),
            SortOrder::Asc => a.value.partial_cmp(&b.value),
        }
        .expect("record values are finite");
        by_value.then_with(|| a.entity_id.cmp(&b.entity_id))
    }
}

/// Returns the single best entity. Ties on value resolve to the smallest
/// entity id. Answer text is `"label (value)"`.
pub fn extremum_tool(
    records: &[AttributeRecord],
    direction: Extremum,
) -> Result<AggregationResult, ToolError> {
    let entries = dedupe(records, DedupPolicy::default())?;
    if entries.is_empty() {
        return Err(ToolError::EmptyInput);
    }
    let order = match direction {
        Extremum::Max => SortOrder::Desc,
        Extremum::Min => SortOrder::Asc,
    };
    let cmp = compare_for(order);
    let winner = entries
        .iter()
        .min_by(|a, b| cmp(a, b))
        .expect("non-empty")
        .clone();
    let answer_text = format!("{} ({})", winner.entity_label, format_number(winner.value));
    Ok(AggregationResult {
        kind: match direction {
            Extremum::Max => AggregationKind::Max,
            Extremum::Min => AggregationKind::Min,
        },
        count_value: None,
        ranked: Some(vec![winner]),
        answer_text,
    })
}

/// Produces the full ordering of entities. Answer text is the comma-joined
/// label sequence.
pub fn sort_tool(
    records: &[AttributeRecord],
    order: SortOrder,
) -> Result<AggregationResult, ToolError> {
    let mut entries = dedupe(records, DedupPolicy::default())?;
    if entries.is_empty() {
        return Err(ToolError::EmptyInput);
    }
    entries.sort_by(compare_for(order));
    Ok(AggregationResult {
        kind: AggregationKind::Sort,
        count_value: None,
        answer_text: join_labels(&entries),
        ranked: Some(entries),
    })
}

/// Heap element ordered so the max-heap's top is the worst of the current
/// best k under (value per `order`, then ascending id).
struct HeapItem {
    entry: RankedEntry,
    order: SortOrder,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Rank order puts the best entry first, so the max-heap's greatest
        // element is the worst of the kept set.
        compare_for(self.order)(&self.entry, &other.entry)
    }
}

/// Returns the k best entities without sorting the whole input, using a
/// bounded heap. Output is identical to `sort_tool`'s first k entries.
pub fn topk_tool(
    records: &[AttributeRecord],
    k: usize,
    order: SortOrder,
) -> Result<AggregationResult, ToolError> {
    if k == 0 {
        return Err(ToolError::InvalidK);
    }
    let entries = dedupe(records, DedupPolicy::default())?;
    if entries.is_empty() {
        return Err(ToolError::EmptyInput);
    }
    let mut heap: BinaryHeap<HeapItem> = BinaryHeap::with_capacity(k + 1);
    for entry in entries {
        let item = HeapItem { entry, order };
        if heap.len() < k {
            heap.push(item);
        } else if let Some(worst) = heap.peek() {
            if item.cmp(worst) == Ordering::Less {
                heap.pop();
                heap.push(item);
            }
        }
    }
    let mut kept: Vec<RankedEntry> = heap.into_iter().map(|i| i.entry).collect();
    kept.sort_by(compare_for(order));
    Ok(AggregationResult {
        kind: AggregationKind::TopK,
        count_value: None,
        answer_text: join_labels(&kept),
        ranked: Some(kept),
    })
}

fn join_labels(entries: &[RankedEntry]) -> String {
    entries
        .iter()
        .map(|e| e.entity_label.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Left-folds the sets with the given operation. At least one set is
/// required; a single set passes through unchanged.
pub fn set_combine(
    sets: &[BTreeSet<String>],
    op: SetOp,
) -> Result<BTreeSet<String>, ToolError> {
    let (first, rest) = sets.split_first().ok_or(ToolError::NoSets)?;
    let mut acc = first.clone();
    for s in rest {
        acc = match op {
            SetOp::Intersection => acc.intersection(s).cloned().collect(),
            SetOp::Union => acc.union(s).cloned().collect(),
        };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(id: &str, value: f64) -> AttributeRecord {
        AttributeRecord::numeric(id, &format!("L{id}"), "years_experience", value)
    }

    #[test]
    fn count_ignores_duplicate_entities() {
        let records = vec![rec("a", 1.0), rec("b", 2.0), rec("a", 3.0)];
        let out = count_tool(&records);
        assert_eq!(out.count_value, Some(2));
        assert_eq!(out.answer_text, "2");
    }

    #[test]
    fn count_of_empty_input_is_zero() {
        let out = count_tool(&[]);
        assert_eq!(out.count_value, Some(0));
        assert_eq!(out.answer_text, "0");
    }

    #[test]
    fn extremum_breaks_ties_by_ascending_id() {
        let records = vec![rec("b", 9.0), rec("a", 9.0), rec("c", 1.0)];
        let out = extremum_tool(&records, Extremum::Max).unwrap();
        assert_eq!(out.ranked.as_ref().unwrap()[0].entity_id, "a");
        assert_eq!(out.answer_text, "La (9)");
    }

    #[test]
    fn extremum_min_of_single_record() {
        let out = extremum_tool(&[rec("z", 4.5)], Extremum::Min).unwrap();
        assert_eq!(out.answer_text, "Lz (4.5)");
    }

    #[test]
    fn extremum_of_empty_input_errors() {
        assert_eq!(
            extremum_tool(&[], Extremum::Max).unwrap_err(),
            ToolError::EmptyInput
        );
    }

    #[test]
    fn sort_orders_all_entries_with_id_tiebreak() {
        let records = vec![rec("c", 5.0), rec("a", 7.0), rec("b", 5.0)];
        let out = sort_tool(&records, SortOrder::Desc).unwrap();
        let ids: Vec<&str> = out
            .ranked
            .as_ref()
            .unwrap()
            .iter()
            .map(|e| e.entity_id.as_str())
            .collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(out.answer_text, "La, Lb, Lc");
    }

    #[test]
    fn dedupe_max_value_policy_keeps_largest() {
        let records = vec![rec("a", 1.0), rec("a", 5.0), rec("a", 3.0)];
        let entries = dedupe(&records, DedupPolicy::MaxValue).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].value, 5.0);
    }

    #[test]
    fn dedupe_first_seen_policy_keeps_first() {
        let records = vec![rec("a", 1.0), rec("a", 5.0)];
        let entries = dedupe(&records, DedupPolicy::FirstSeen).unwrap();
        assert_eq!(entries[0].value, 1.0);
    }

    #[test]
    fn unit_mismatch_is_rejected() {
        let records = vec![
            AttributeRecord {
                value: RecordValue::number_with_unit(3.0, "years"),
                ..rec("a", 0.0)
            },
            AttributeRecord {
                value: RecordValue::number_with_unit(5.0, "months"),
                ..rec("b", 0.0)
            },
        ];
        let err = sort_tool(&records, SortOrder::Asc).unwrap_err();
        assert!(matches!(err, ToolError::UnitMismatch { .. }), "{err}");
    }

    #[test]
    fn non_numeric_record_is_rejected() {
        let records = vec![AttributeRecord {
            value: RecordValue::Text("ten".into()),
            ..rec("a", 0.0)
        }];
        let err = topk_tool(&records, 1, SortOrder::Desc).unwrap_err();
        assert!(matches!(err, ToolError::NonNumeric { .. }));
    }

    #[test]
    fn topk_zero_k_is_invalid() {
        assert_eq!(
            topk_tool(&[rec("a", 1.0)], 0, SortOrder::Desc).unwrap_err(),
            ToolError::InvalidK
        );
    }

    #[test]
    fn topk_with_k_beyond_len_returns_everything() {
        let records = vec![rec("a", 1.0), rec("b", 2.0)];
        let out = topk_tool(&records, 10, SortOrder::Asc).unwrap();
        assert_eq!(out.ranked.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn set_combine_folds_left() {
        let s = |ids: &[&str]| ids.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        let sets = vec![s(&["a", "b", "c"]), s(&["b", "c"]), s(&["c", "d"])];
        assert_eq!(set_combine(&sets, SetOp::Intersection).unwrap(), s(&["c"]));
        assert_eq!(
            set_combine(&sets, SetOp::Union).unwrap(),
            s(&["a", "b", "c", "d"])
        );
        assert_eq!(set_combine(&[], SetOp::Union).unwrap_err(), ToolError::NoSets);
        assert_eq!(set_combine(&sets[..1], SetOp::Intersection).unwrap(), sets[0]);
    }

    #[test]
    fn format_number_uses_minimal_digits() {
        assert_eq!(format_number(12.0), "12");
        assert_eq!(format_number(12.5), "12.5");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-3.0), "-3");
    }

    prop_compose! {
        fn arb_records()(
            pairs in prop::collection::vec((0usize..40, -1000i64..1000), 0..120)
        ) -> Vec<AttributeRecord> {
            pairs
                .into_iter()
                .map(|(idx, v)| rec(&format!("e{idx:02}"), v as f64 / 4.0))
                .collect()
        }
    }

    proptest! {
        #[test]
        fn topk_equals_sort_prefix(records in arb_records(), k in 1usize..20) {
            prop_assume!(!records.is_empty());
            let sorted = sort_tool(&records, SortOrder::Desc).unwrap();
            let top = topk_tool(&records, k, SortOrder::Desc).unwrap();
            let prefix: Vec<_> = sorted
                .ranked
                .unwrap()
                .into_iter()
                .take(k)
                .collect();
            prop_assert_eq!(top.ranked.unwrap(), prefix);
        }

        #[test]
        fn argmax_is_tail_of_ascending_sort(records in arb_records()) {
            prop_assume!(!records.is_empty());
            let asc = sort_tool(&records, SortOrder::Asc).unwrap().ranked.unwrap();
            let max = extremum_tool(&records, Extremum::Max).unwrap().ranked.unwrap();
            // The ascending sort ends with the max value; on ties the argmax
            // picks the smallest id among the tied tail entries.
            let best = max[0].clone();
            let tail_value = asc.last().unwrap().value;
            prop_assert_eq!(best.value, tail_value);
            let tied_min_id = asc
                .iter()
                .filter(|e| e.value == tail_value)
                .map(|e| e.entity_id.clone())
                .min()
                .unwrap();
            prop_assert_eq!(best.entity_id, tied_min_id);
        }

        #[test]
        fn count_is_invariant_to_order_and_duplication(records in arb_records()) {
            let base = count_tool(&records).count_value;
            let mut doubled = records.clone();
            doubled.extend(records.iter().cloned());
            doubled.reverse();
            prop_assert_eq!(count_tool(&doubled).count_value, base);
        }

        #[test]
        fn ranking_is_scale_invariant(records in arb_records()) {
            prop_assume!(!records.is_empty());
            let ids = |r: AggregationResult| -> Vec<String> {
                r.ranked.unwrap().into_iter().map(|e| e.entity_id).collect()
            };
            let scaled: Vec<AttributeRecord> = records
                .iter()
                .cloned()
                .map(|mut r| {
                    if let RecordValue::Number { value, .. } = &mut r.value {
                        *value *= 4.0;
                    }
                    r
                })
                .collect();
            prop_assert_eq!(
                ids(sort_tool(&records, SortOrder::Desc).unwrap()),
                ids(sort_tool(&scaled, SortOrder::Desc).unwrap())
            );
        }

        #[test]
        fn set_combine_is_commutative_on_two_sets(
            a in prop::collection::btree_set("[a-e][0-9]", 0..20),
            b in prop::collection::btree_set("[a-e][0-9]", 0..20),
        ) {
            for op in [SetOp::Intersection, SetOp::Union] {
                let ab = set_combine(&[a.clone(), b.clone()], op).unwrap();
                let ba = set_combine(&[b.clone(), a.clone()], op).unwrap();
                prop_assert_eq!(ab, ba);
            }
        }
    }
}
