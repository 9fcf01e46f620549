//! Stack-driven ID3 construction where every node is a relational view.
//!
//! The root view projects the source table; a child view selects one value
//! of the split attribute from its parent view and drops that column. For
//! each popped node every remaining attribute is tried as a candidate: one
//! provisional view per value present in the node, a `GROUP BY` histogram
//! per view, and the resulting information gain. The best candidate's
//! children are committed under final ids and pushed; all other provisional
//! views are dropped.
//!
//! Ordering rules, all of which affect node numbering:
//! - ids are handed out only when a split is committed, from a counter
//!   starting at 0 for the root;
//! - children are created and pushed in first-appearance order of their
//!   value, so the last child is expanded first;
//! - on equal gain the attribute earlier in the schema wins;
//! - a split is made only when its gain is strictly greater than `min_gain`.

use log::debug;

use crate::backend::{Backend, ViewDefinition};
use crate::dataset::DatasetSchema;
use crate::error::{Error, Result};
use crate::histogram::ClassHistogram;
use crate::ident;
use crate::measures::{self, EntropyResult};
use crate::results::{DecisionTree, ResultRow, ResultTable};

pub const DEFAULT_RES_NAME: &str = "BTRES";
pub const DEFAULT_ROOT_VIEW: &str = "BTROOT";

/// Parameters of one build.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildParams {
    /// Source table.
    pub table_name: String,
    /// Class attribute, the attribute to predict.
    pub class: String,
    /// Result table. Default `BTRES`.
    pub res_name: String,
    /// A node is split only if its best gain is strictly above this. Default 0.
    pub min_gain: f64,
    /// Root view name; node `k` gets `<root_view>_<k>`. Default `BTROOT`.
    pub root_view: String,
    /// Drop node views once the build is done. Default true.
    pub del: bool,
}

impl BuildParams {
    pub fn new(table_name: impl Into<String>, class: impl Into<String>) -> Self {
        BuildParams {
            table_name: table_name.into(),
            class: class.into(),
            res_name: DEFAULT_RES_NAME.to_string(),
            min_gain: 0.0,
            root_view: DEFAULT_ROOT_VIEW.to_string(),
            del: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for name in [
            &self.table_name,
            &self.class,
            &self.res_name,
            &self.root_view,
        ] {
            ident::validate(name)?;
        }
        if !(self.min_gain.is_finite() && self.min_gain >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "min_gain must be a finite non-negative number, got {}",
                self.min_gain
            )));
        }
        Ok(())
    }

    /// View name of committed node `id`.
    pub fn view_name(&self, id: u32) -> String {
        if id == 0 {
            self.root_view.clone()
        } else {
            format!("{}_{id}", self.root_view)
        }
    }
}

/// A tree node. Provisional nodes (children of a candidate that has not
/// been committed) have no `num`.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub num: Option<u32>,
    pub nview: String,
    /// `ATTR=VALUE`, empty for the root.
    pub rule: String,
    pub split: Option<(String, String)>,
    pub entrop: f64,
    pub pop: u64,
    pub parent: Option<u32>,
    /// 1 for the root.
    pub level: u32,
    pub histogram: ClassHistogram,
    pub remaining_attributes: Vec<String>,
}

impl Node {
    fn entropy_result(&self) -> EntropyResult {
        EntropyResult {
            entropy: self.entrop,
            pop: self.pop,
        }
    }

    fn definition(&self, parent_view: &str, class: &str) -> ViewDefinition {
        let mut projected = self.remaining_attributes.clone();
        projected.push(class.to_string());
        ViewDefinition {
            view_name: self.nview.clone(),
            parent_relation: parent_view.to_string(),
            projected_attributes: projected,
            predicate: self.split.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub att_name: String,
    pub gain: f64,
    pub nodes: Vec<Node>,
}

/// LIFO of nodes waiting to be expanded.
#[derive(Debug, Default)]
pub struct NodeStack {
    nodes: Vec<Node>,
}

impl NodeStack {
    pub fn push(&mut self, node: Node) {
        self.nodes.push(node);
    }

    pub fn pop(&mut self) -> Option<Node> {
        self.nodes.pop()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Everything a build produced: the tree plus the committed node records.
#[derive(Debug, Clone)]
pub struct BuildReport {
    pub tree: DecisionTree,
    /// Committed nodes in id order.
    pub nodes: Vec<Node>,
    /// Node views dropped at the end (0 when `del` is false).
    pub views_dropped: usize,
}

/// Builds the tree for `params` over a table already loaded in `backend`.
pub fn build_tree(
    backend: &Backend,
    schema: &DatasetSchema,
    params: &BuildParams,
) -> Result<DecisionTree> {
    Ok(TreeBuilder::new(backend, schema, params.clone())?
        .run()?
        .tree)
}

pub struct TreeBuilder<'a> {
    backend: &'a Backend,
    schema: &'a DatasetSchema,
    params: BuildParams,
    results: ResultTable<'a>,
    stack: NodeStack,
    committed: Vec<Node>,
    rows: Vec<ResultRow>,
    next_id: u32,
}

impl<'a> TreeBuilder<'a> {
    /// Checks preconditions and creates the (empty) result table.
    pub fn new(
        backend: &'a Backend,
        schema: &'a DatasetSchema,
        params: BuildParams,
    ) -> Result<Self> {
        params.validate()?;
        if !params.class.eq_ignore_ascii_case(&schema.class_attribute) {
            return Err(Error::InvalidParameter(format!(
                "class `{}` does not match the dataset's class attribute `{}`",
                params.class, schema.class_attribute
            )));
        }
        if schema.predictive().next().is_none() {
            return Err(Error::NoPredictiveAttributes(
                schema.class_attribute.clone(),
            ));
        }
        let table = backend.table(&params.table_name)?;
        if backend.count_rows(table.name())? == 0 {
            return Err(Error::EmptySource(params.table_name.clone()));
        }
        let results = ResultTable::create(backend, &params.res_name, schema)?;
        Ok(TreeBuilder {
            backend,
            schema,
            params,
            results,
            stack: NodeStack::default(),
            committed: Vec::new(),
            rows: Vec::new(),
            next_id: 0,
        })
    }

    pub fn run(mut self) -> Result<BuildReport> {
        let root = self.create_root()?;
        self.record(&root)?;
        self.stack.push(root);

        while let Some(node) = self.stack.pop() {
            if node.entrop == 0.0 || node.remaining_attributes.is_empty() {
                continue;
            }
            let candidates = self.evaluate_candidates(&node)?;
            let best = best_candidate(&candidates);
            match best {
                Some(i) if candidates[i].gain > self.params.min_gain => {
                    let mut losers = candidates;
                    let winner = losers.remove(i);
                    debug!(
                        "node {:?}: split on {} (gain {})",
                        node.num, winner.att_name, winner.gain
                    );
                    for child in self.commit_split(&node, winner, losers)? {
                        self.stack.push(child);
                    }
                }
                _ => {
                    self.destroy(&candidates)?;
                }
            }
        }

        let mut views_dropped = 0;
        if self.params.del {
            let names: Vec<&str> = self
                .committed
                .iter()
                .rev()
                .map(|n| n.nview.as_str())
                .collect();
            views_dropped = self.backend.drop_views(&names)?.dropped;
        }
        Ok(BuildReport {
            tree: DecisionTree {
                rows: self.rows,
                schema: self.schema.clone(),
                params: self.params,
            },
            nodes: self.committed,
            views_dropped,
        })
    }

    /// Creates the root view and measures it. Called by [`TreeBuilder::run`];
    /// public so single steps can be inspected.
    pub fn create_root(&mut self) -> Result<Node> {
        let remaining: Vec<String> = self.schema.predictive().map(|a| a.name.clone()).collect();
        let mut root = Node {
            num: Some(self.take_id()),
            nview: self.params.view_name(0),
            rule: String::new(),
            split: None,
            entrop: 0.0,
            pop: 0,
            parent: None,
            level: 1,
            histogram: ClassHistogram::new(),
            remaining_attributes: remaining,
        };
        self.backend
            .create_view(&root.definition(&self.params.table_name, &self.schema.class_attribute))?;
        self.measure(&mut root)?;
        Ok(root)
    }

    fn take_id(&mut self) -> u32 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    fn measure(&self, node: &mut Node) -> Result<()> {
        node.histogram = self
            .backend
            .class_counts(&node.nview, &self.schema.class_attribute)?;
        let e = measures::entropy(&node.histogram);
        node.entrop = e.entropy;
        node.pop = e.pop;
        Ok(())
    }

    fn record(&mut self, node: &Node) -> Result<()> {
        let row = ResultRow {
            node: node.num.expect("only committed nodes are recorded"),
            parent: node.parent,
            rule: node.rule.clone(),
            class_counts: node.histogram.aligned(self.schema.class_values()),
        };
        self.results.insert(&row)?;
        self.rows.push(row);
        self.committed.push(node.clone());
        Ok(())
    }

    /// One candidate per remaining attribute of `node`, each with a
    /// provisional child view per value present in the node.
    pub fn evaluate_candidates(&mut self, node: &Node) -> Result<Vec<Candidate>> {
        let parent_id = node.num.expect("only committed nodes are expanded");
        let parent_stats = node.entropy_result();
        let mut candidates = Vec::with_capacity(node.remaining_attributes.len());
        for (a, att) in node.remaining_attributes.iter().enumerate() {
            let remaining: Vec<String> = node
                .remaining_attributes
                .iter()
                .filter(|other| *other != att)
                .cloned()
                .collect();
            let values = self.backend.distinct_values(&node.nview, att)?;
            let mut children = Vec::with_capacity(values.len());
            for (v, value) in values.into_iter().enumerate() {
                let mut child = Node {
                    num: None,
                    nview: format!("{}_P{parent_id}_{a}_{v}", self.params.root_view),
                    rule: format!("{att}={value}"),
                    split: Some((att.clone(), value)),
                    entrop: 0.0,
                    pop: 0,
                    parent: Some(parent_id),
                    level: node.level + 1,
                    histogram: ClassHistogram::new(),
                    remaining_attributes: remaining.clone(),
                };
                self.backend
                    .create_view(&child.definition(&node.nview, &self.schema.class_attribute))?;
                self.measure(&mut child)?;
                children.push(child);
            }
            let stats: Vec<EntropyResult> = children.iter().map(Node::entropy_result).collect();
            let gain = measures::information_gain(&parent_stats, &stats)?;
            candidates.push(Candidate {
                att_name: att.clone(),
                gain,
                nodes: children,
            });
        }
        Ok(candidates)
    }

    /// Gives the winner's children final ids and views, records them, and
    /// drops every provisional view. Returns the children in push order.
    pub fn commit_split(
        &mut self,
        node: &Node,
        winner: Candidate,
        losers: Vec<Candidate>,
    ) -> Result<Vec<Node>> {
        self.destroy(&losers)?;
        let mut committed = Vec::with_capacity(winner.nodes.len());
        for mut child in winner.nodes {
            let provisional = std::mem::take(&mut child.nview);
            let id = self.take_id();
            child.num = Some(id);
            child.nview = self.params.view_name(id);
            self.backend
                .create_view(&child.definition(&node.nview, &self.schema.class_attribute))?;
            self.backend.drop_views(&[provisional])?;
            self.record(&child)?;
            committed.push(child);
        }
        Ok(committed)
    }

    fn destroy(&self, candidates: &[Candidate]) -> Result<()> {
        let names: Vec<&str> = candidates
            .iter()
            .flat_map(|c| c.nodes.iter().map(|n| n.nview.as_str()))
            .collect();
        self.backend.drop_views(&names)?;
        Ok(())
    }
}

/// Index of the highest-gain candidate; the earliest wins ties.
pub fn best_candidate(candidates: &[Candidate]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, c) in candidates.iter().enumerate() {
        if best.is_none_or(|b| c.gain > candidates[b].gain) {
            best = Some(i);
        }
    }
    best
}
