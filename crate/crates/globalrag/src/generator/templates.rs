//! Question surface forms: turns an executed trajectory into natural
//! language. Template wording is chosen so the rendered question classifies
//! back to its task and carries the parameters (k, direction, order) the
//! pipeline must recover.

use rand::Rng;

use crate::corpus::Predicate;
use crate::pipeline::TaskType;
use crate::tools::{format_number, Extremum, SetOp, SortOrder};

use super::{Trajectory, TrajectoryStep};

/// Number of surface templates per task.
pub const TEMPLATES_PER_TASK: usize = 3;

/// English condition clause for one predicate.
pub fn phrase_for_predicate(predicate: &Predicate) -> String {
    match predicate {
        Predicate::Eq { attr, value } if attr == "domain" => {
            format!("in the {} domain", value.as_text().unwrap_or("unknown"))
        }
        Predicate::Eq { attr, value } if attr == "city" => {
            format!("based in {}", value.as_text().unwrap_or("unknown"))
        }
        Predicate::Eq { attr, value } => match value.as_text() {
            Some(text) => format!("whose {attr} is {text}"),
            None => format!("whose {attr} matches the given value"),
        },
        Predicate::Ge { value, .. } => {
            format!("with at least {} years of experience", format_number(*value))
        }
        Predicate::Gt { value, .. } => {
            format!("with more than {} years of experience", format_number(*value))
        }
        Predicate::Le { value, .. } => {
            format!("with at most {} years of experience", format_number(*value))
        }
        Predicate::Lt { value, .. } => {
            format!("with fewer than {} years of experience", format_number(*value))
        }
        Predicate::Contains { value, .. } => format!("skilled in {value}"),
        Predicate::ContainsAny { values, .. } => {
            let canonical = values.first().map(String::as_str).unwrap_or("the area");
            format!("experienced in {canonical} or closely related areas")
        }
    }
}

/// Joins the per-step clauses with the trajectory's set operations.
pub fn condition_clause(steps: &[TrajectoryStep], set_ops: &[SetOp]) -> String {
    let mut clause = String::new();
    for (i, step) in steps.iter().enumerate() {
        if i > 0 {
            clause.push_str(match set_ops[i - 1] {
                SetOp::Intersection => " and ",
                SetOp::Union => " or ",
            });
        }
        clause.push_str(&phrase_for_predicate(&step.predicate));
    }
    clause
}

/// Renders the natural-language question for a trajectory, picking one of
/// the task's templates at random.
pub fn render_question<R: Rng>(trajectory: &Trajectory, rng: &mut R) -> String {
    let conds = condition_clause(&trajectory.steps, &trajectory.set_ops);
    let variant = rng.random_range(0..TEMPLATES_PER_TASK);
    match trajectory.task {
        TaskType::Count => count_question(&conds, variant),
        TaskType::MinMax => {
            let direction = trajectory.params.direction.unwrap_or(Extremum::Max);
            minmax_question(&conds, direction, variant)
        }
        TaskType::Sort => {
            let order = trajectory.params.order.unwrap_or(SortOrder::Desc);
            sort_question(&conds, order, variant)
        }
        TaskType::TopK => {
            let k = trajectory.params.k.unwrap_or(5);
            let order = trajectory.params.order.unwrap_or(SortOrder::Desc);
            topk_question(&conds, k, order, variant)
        }
    }
}

fn count_question(conds: &str, variant: usize) -> String {
    match variant {
        0 => format!("How many candidates {conds} are there?"),
        1 => format!("How many professionals {conds} does the collection contain?"),
        _ => format!("Count the candidates {conds}."),
    }
}

fn minmax_question(conds: &str, direction: Extremum, variant: usize) -> String {
    match (variant, direction) {
        (0, Extremum::Max) => {
            format!("Who has the most years of experience among candidates {conds}?")
        }
        (0, Extremum::Min) => {
            format!("Who has the fewest years of experience among candidates {conds}?")
        }
        (1, Extremum::Max) => {
            format!("Which candidate {conds} has the highest number of years of experience?")
        }
        (1, Extremum::Min) => {
            format!("Which candidate {conds} has the lowest number of years of experience?")
        }
        (_, Extremum::Max) => {
            format!("Among the candidates {conds}, who is the most experienced?")
        }
        (_, Extremum::Min) => {
            format!("Among the candidates {conds}, who is the least experienced?")
        }
    }
}

fn sort_question(conds: &str, order: SortOrder, variant: usize) -> String {
    match (variant, order) {
        (0, SortOrder::Desc) => {
            format!("Sort the candidates {conds} by years of experience in descending order.")
        }
        (0, SortOrder::Asc) => {
            format!("Sort the candidates {conds} by years of experience in ascending order.")
        }
        (1, SortOrder::Desc) => {
            format!("Rank the candidates {conds} from most to least experienced.")
        }
        (1, SortOrder::Asc) => {
            format!("Rank the candidates {conds} from least to most experienced.")
        }
        (_, SortOrder::Desc) => {
            format!("List all candidates {conds} ordered by years of experience, highest first.")
        }
        (_, SortOrder::Asc) => {
            format!("List all candidates {conds} ordered by years of experience, lowest first.")
        }
    }
}

fn topk_question(conds: &str, k: usize, order: SortOrder, variant: usize) -> String {
    let superlative = match order {
        SortOrder::Desc => "most",
        SortOrder::Asc => "least",
    };
    match variant {
        0 => format!("List the top {k} {superlative} experienced candidates {conds}."),
        1 => {
            let noun_superlative = match order {
                SortOrder::Desc => "most",
                SortOrder::Asc => "fewest",
            };
            format!(
                "Give the top {k} candidates {conds} with the {noun_superlative} years of experience."
            )
        }
        _ => format!("Identify the top {k} {superlative} experienced candidates {conds}."),
    }
}
