// Copyright 2026 The Policy Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLICY_ENGINE_PREDICATE_H_
#define POLICY_ENGINE_PREDICATE_H_

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "policy_engine/label_set.h"

namespace policy_engine {

// Boolean expression over mechanism labels.
//
// Atoms:
//   true                 matches every mechanism
//   key == value         HasLabel: value ∈ labels[key]
//   attr in {a, b, ...}  AttrIntersects: labels[attr] ∩ {a, b, ...} ≠ ∅
// Connectives: `&&`, `||`, `!` and parentheses. `key in {v, w}` for a key
// other than `attr` is shorthand for `key == v || key == w`, and `false`
// for `!true`.
//
// Predicates are immutable and cheap to copy.
class Predicate {
 public:
  enum class Kind { kTrue, kHasLabel, kAttrIntersects, kAnd, kOr, kNot };

  // Defaults to `true`.
  Predicate();

  static Predicate True();
  static Predicate HasLabel(std::string key, std::string value);
  static Predicate AttrIntersects(std::set<std::string> attributes);
  static Predicate And(std::vector<Predicate> children);
  static Predicate Or(std::vector<Predicate> children);
  static Predicate Not(Predicate child);

  static absl::StatusOr<Predicate> Parse(absl::string_view text);

  Kind kind() const;
  // kHasLabel only.
  const std::string& key() const;
  const std::string& value() const;
  // kAttrIntersects only.
  const std::set<std::string>& attributes() const;
  // kAnd, kOr, kNot.
  const std::vector<Predicate>& children() const;

  bool Evaluate(const LabelSet& labels) const;

  // Canonical text form; Parse(ToString()) reproduces an equal predicate.
  std::string ToString() const;

  bool operator==(const Predicate& other) const;

 private:
  struct Node;
  explicit Predicate(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

bool EvalPredicate(const Predicate& predicate, const LabelSet& labels);

// Decides lhs ⊑ rhs (every mechanism matching lhs matches rhs) by syntactic
// subsumption when both sides are conjunctions of atoms. Anything ⊑ `true`.
// Returns nullopt outside that fragment; a false result means "not provable
// syntactically".
std::optional<bool> SyntacticallyImplies(const Predicate& lhs,
                                         const Predicate& rhs);

}  // namespace policy_engine

#endif  // POLICY_ENGINE_PREDICATE_H_
