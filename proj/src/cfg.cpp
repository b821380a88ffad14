// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "solfp/ast_util.hpp"
#include "solfp/model.hpp"

namespace solfp {

void Effects::merge(const Effects& other) {
  state_writes.insert(other.state_writes.begin(), other.state_writes.end());
  external_call = external_call || other.external_call;
  event_emit = event_emit || other.event_emit;
}

std::string to_string(const Effects& e) {
  if (e.local_only()) return "{LocalOnly}";
  std::ostringstream out;
  out << '{';
  bool first = true;
  auto sep = [&] {
    if (!first) out << ", ";
    first = false;
  };
  for (const std::string& v : e.state_writes) {
    sep();
    out << "StateWrite(" << v << ')';
  }
  if (e.external_call) {
    sep();
    out << "ExternalCall";
  }
  if (e.event_emit) {
    sep();
    out << "EventEmit";
  }
  out << '}';
  return out.str();
}

Cfg::Cfg() { nodes_.emplace_back(); }

std::optional<std::size_t> Cfg::node_of(const Stmt* s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Cfg::construct(const Stmt& body) { entry_ = build(body, exit_node, Jumps{}); }

std::size_t Cfg::add(const Stmt& s) {
  nodes_.push_back(Node{&s, {}, {}, 0});
  index_[&s] = nodes_.size() - 1;
  return nodes_.size() - 1;
}

std::size_t Cfg::build_list(const std::vector<Stmt>& list, std::size_t next, const Jumps& j) {
  for (auto it = list.rbegin(); it != list.rend(); ++it) next = build(*it, next, j);
  return next;
}

std::size_t Cfg::build(const Stmt& s, std::size_t next, const Jumps& j) {
  switch (s.kind) {
    case StmtKind::Block:
      return build_list(s.body, next, j);
    case StmtKind::If: {
      std::size_t n = add(s);
      std::size_t then_entry = s.body.empty() ? next : build(s.body[0], next, j);
      std::size_t else_entry = s.else_body.empty() ? next : build(s.else_body[0], next, j);
      nodes_[n].succ = {then_entry, else_entry};
      return n;
    }
    case StmtKind::While: {
      std::size_t n = add(s);
      std::size_t body_entry = s.body.empty() ? n : build(s.body[0], n, Jumps{next, n});
      nodes_[n].succ = {body_entry, next};
      return n;
    }
    case StmtKind::DoWhile: {
      std::size_t n = add(s);
      std::size_t body_entry = s.body.empty() ? n : build(s.body[0], n, Jumps{next, n});
      nodes_[n].succ = {body_entry, next};
      return body_entry;
    }
    case StmtKind::For: {
      // The header node stands for the condition and the post expression.
      std::size_t h = add(s);
      std::size_t body_entry = s.body.empty() ? h : build(s.body[0], h, Jumps{next, h});
      bool infinite = s.exprs.empty() || s.exprs[0].kind == ExprKind::Empty;
      if (infinite)
        nodes_[h].succ = {body_entry};
      else
        nodes_[h].succ = {body_entry, next};
      return s.init.empty() ? h : build(s.init[0], h, j);
    }
    case StmtKind::Return:
    case StmtKind::Revert:
    case StmtKind::Throw: {
      std::size_t n = add(s);
      nodes_[n].succ = {exit_node};
      return n;
    }
    case StmtKind::Require:
    case StmtKind::Assert: {
      std::size_t n = add(s);
      nodes_[n].succ = {next};
      if (next != exit_node) nodes_[n].succ.push_back(exit_node);
      return n;
    }
    case StmtKind::Break: {
      std::size_t n = add(s);
      nodes_[n].succ = {j.brk};
      return n;
    }
    case StmtKind::Continue: {
      std::size_t n = add(s);
      nodes_[n].succ = {j.cont};
      return n;
    }
    default: {
      std::size_t n = add(s);
      nodes_[n].succ = {next};
      return n;
    }
  }
}

void Cfg::form_blocks() {
  const std::size_t n = nodes_.size();
  for (Node& node : nodes_) {
    std::sort(node.succ.begin(), node.succ.end());
    node.succ.erase(std::unique(node.succ.begin(), node.succ.end()), node.succ.end());
  }
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t : nodes_[i].succ) preds[t].push_back(i);

  // A node starts a block unless it is the only successor of a node that
  // is its only predecessor.
  auto continues_block = [&](std::size_t i) {
    if (i == exit_node || i == entry_ || preds[i].size() != 1) return false;
    std::size_t p = preds[i][0];
    return p != exit_node && p != i && nodes_[p].succ.size() == 1;
  };

  std::vector<bool> placed(n, false);
  placed[exit_node] = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (placed[i] || continues_block(i)) continue;
    Block b;
    std::size_t cur = i;
    while (true) {
      b.nodes.push_back(cur);
      placed[cur] = true;
      if (nodes_[cur].succ.size() != 1) break;
      std::size_t nx = nodes_[cur].succ[0];
      if (placed[nx] || !continues_block(nx)) break;
      cur = nx;
    }
    blocks_.push_back(std::move(b));
  }
  // Nodes on a cycle with no other entry never start a block above.
  for (std::size_t i = 1; i < n; ++i)
    if (!placed[i]) {
      Block b;
      std::size_t cur = i;
      while (!placed[cur]) {
        b.nodes.push_back(cur);
        placed[cur] = true;
        if (nodes_[cur].succ.size() != 1) break;
        cur = nodes_[cur].succ[0];
      }
      blocks_.push_back(std::move(b));
    }

  for (std::size_t bi = 0; bi < blocks_.size(); ++bi)
    for (std::size_t id : blocks_[bi].nodes) nodes_[id].block = bi;

  // Reverse reachability from the exit decides loop-trapped blocks.
  std::vector<bool> reaches_exit(n, false);
  std::deque<std::size_t> work{exit_node};
  reaches_exit[exit_node] = true;
  while (!work.empty()) {
    std::size_t cur = work.front();
    work.pop_front();
    for (std::size_t p : preds[cur])
      if (!reaches_exit[p]) {
        reaches_exit[p] = true;
        work.push_back(p);
      }
  }
  for (Block& b : blocks_) {
    const Node& last = nodes_[b.nodes.back()];
    for (std::size_t t : last.succ)
      if (t != exit_node) b.succ.push_back(nodes_[t].block);
    std::sort(b.succ.begin(), b.succ.end());
    b.succ.erase(std::unique(b.succ.begin(), b.succ.end()), b.succ.end());
    b.loop_trapped = !reaches_exit[b.nodes.back()];
  }
}

Effects statements_after(const Cfg& cfg, const Stmt& site) {
  auto start = cfg.node_of(&site);
  if (!start) throw std::logic_error("statement is not part of this control-flow graph");
  const auto& nodes = cfg.nodes();
  std::vector<bool> seen(nodes.size(), false);
  std::deque<std::size_t> work;
  for (std::size_t s : nodes[*start].succ)
    if (!seen[s]) {
      seen[s] = true;
      work.push_back(s);
    }
  Effects out;
  while (!work.empty()) {
    std::size_t cur = work.front();
    work.pop_front();
    out.merge(nodes[cur].effects);
    for (std::size_t s : nodes[cur].succ)
      if (!seen[s]) {
        seen[s] = true;
        work.push_back(s);
      }
  }
  return out;
}

Effects statements_after(const Cfg& cfg, const SourceSpan& site) {
  for (const Cfg::Node& node : cfg.nodes())
    if (node.stmt && node.stmt->span == site) return statements_after(cfg, *node.stmt);
  throw std::logic_error("no statement with this span in the control-flow graph");
}

}  // namespace solfp
