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

#include "policy_engine/predicate.h"

#include <algorithm>
#include <cctype>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "policy_engine/errors.h"

namespace policy_engine {

struct Predicate::Node {
  Kind kind = Kind::kTrue;
  std::string key;
  std::string value;
  std::set<std::string> attributes;
  std::vector<Predicate> children;
};

namespace {

const std::string& EmptyString() {
  static const std::string* const kEmpty = new std::string;
  return *kEmpty;
}

// Tokenizer + recursive-descent parser for the predicate grammar.
class Parser {
 public:
  explicit Parser(absl::string_view text) : text_(text) {}

  absl::StatusOr<Predicate> ParseAll() {
    absl::StatusOr<Predicate> result = ParseOr();
    if (!result.ok()) return result;
    SkipSpace();
    if (pos_ != text_.size()) return Error("unexpected trailing input");
    return result;
  }

 private:
  absl::StatusOr<Predicate> ParseOr() {
    std::vector<Predicate> terms;
    absl::StatusOr<Predicate> first = ParseAnd();
    if (!first.ok()) return first;
    terms.push_back(*std::move(first));
    while (Consume("||")) {
      absl::StatusOr<Predicate> next = ParseAnd();
      if (!next.ok()) return next;
      terms.push_back(*std::move(next));
    }
    if (terms.size() == 1) return terms.front();
    return Predicate::Or(std::move(terms));
  }

  absl::StatusOr<Predicate> ParseAnd() {
    std::vector<Predicate> terms;
    absl::StatusOr<Predicate> first = ParseUnary();
    if (!first.ok()) return first;
    terms.push_back(*std::move(first));
    while (Consume("&&")) {
      absl::StatusOr<Predicate> next = ParseUnary();
      if (!next.ok()) return next;
      terms.push_back(*std::move(next));
    }
    if (terms.size() == 1) return terms.front();
    return Predicate::And(std::move(terms));
  }

  absl::StatusOr<Predicate> ParseUnary() {
    if (Consume("!")) {
      absl::StatusOr<Predicate> inner = ParseUnary();
      if (!inner.ok()) return inner;
      return Predicate::Not(*std::move(inner));
    }
    if (Consume("(")) {
      absl::StatusOr<Predicate> inner = ParseOr();
      if (!inner.ok()) return inner;
      if (!Consume(")")) return Error("expected ')'");
      return inner;
    }
    return ParseAtom();
  }

  absl::StatusOr<Predicate> ParseAtom() {
    std::string ident = Identifier();
    if (ident.empty()) return Error("expected an atom");
    if (ident == "true") return Predicate::True();
    if (ident == "false") return Predicate::Not(Predicate::True());
    if (Consume("==")) {
      std::string value = Identifier();
      if (value.empty()) return Error("expected a label value after '=='");
      return Predicate::HasLabel(std::move(ident), std::move(value));
    }
    SkipSpace();
    if (text_.substr(pos_, 2) == "in" &&
        (pos_ + 2 == text_.size() || !IsIdentChar(text_[pos_ + 2]))) {
      pos_ += 2;
      if (!Consume("{")) return Error("expected '{' after 'in'");
      std::set<std::string> values;
      if (!Consume("}")) {
        do {
          std::string value = Identifier();
          if (value.empty()) return Error("expected a label value");
          values.insert(std::move(value));
        } while (Consume(","));
        if (!Consume("}")) return Error("expected '}'");
      }
      if (ident == kAttributeKey) {
        return Predicate::AttrIntersects(std::move(values));
      }
      std::vector<Predicate> alternatives;
      for (const std::string& value : values) {
        alternatives.push_back(Predicate::HasLabel(ident, value));
      }
      if (alternatives.empty()) return Predicate::Not(Predicate::True());
      if (alternatives.size() == 1) return alternatives.front();
      return Predicate::Or(std::move(alternatives));
    }
    return Error(absl::StrCat("expected '==' or 'in' after '", ident, "'"));
  }

  static bool IsIdentChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '.' || c == '-';
  }

  std::string Identifier() {
    SkipSpace();
    size_t start = pos_;
    while (pos_ < text_.size() && IsIdentChar(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool Consume(absl::string_view token) {
    SkipSpace();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  absl::Status Error(absl::string_view what) const {
    return ParseError(
        absl::StrCat("predicate '", text_, "' at offset ", pos_, ": ", what));
  }

  absl::string_view text_;
  size_t pos_ = 0;
};

// Flattens a conjunction of atoms; nullopt when an OR or NOT is involved.
std::optional<std::vector<Predicate>> ConjunctiveAtoms(const Predicate& p) {
  switch (p.kind()) {
    case Predicate::Kind::kTrue:
      return std::vector<Predicate>{};
    case Predicate::Kind::kHasLabel:
    case Predicate::Kind::kAttrIntersects:
      return std::vector<Predicate>{p};
    case Predicate::Kind::kAnd: {
      std::vector<Predicate> atoms;
      for (const Predicate& child : p.children()) {
        std::optional<std::vector<Predicate>> sub = ConjunctiveAtoms(child);
        if (!sub.has_value()) return std::nullopt;
        atoms.insert(atoms.end(), sub->begin(), sub->end());
      }
      return atoms;
    }
    case Predicate::Kind::kOr:
    case Predicate::Kind::kNot:
      return std::nullopt;
  }
  return std::nullopt;
}

// Does atom `a` imply atom `b`?
bool AtomImplies(const Predicate& a, const Predicate& b) {
  using Kind = Predicate::Kind;
  if (a.kind() == Kind::kHasLabel && b.kind() == Kind::kHasLabel) {
    return a.key() == b.key() && a.value() == b.value();
  }
  if (a.kind() == Kind::kAttrIntersects && b.kind() == Kind::kAttrIntersects) {
    return std::includes(b.attributes().begin(), b.attributes().end(),
                         a.attributes().begin(), a.attributes().end());
  }
  if (a.kind() == Kind::kHasLabel && b.kind() == Kind::kAttrIntersects) {
    return a.key() == kAttributeKey && b.attributes().contains(a.value());
  }
  if (a.kind() == Kind::kAttrIntersects && b.kind() == Kind::kHasLabel) {
    return b.key() == kAttributeKey &&
           (a.attributes().empty() ||
            (a.attributes().size() == 1 && a.attributes().contains(b.value())));
  }
  return false;
}

std::string ChildString(const Predicate& child) {
  switch (child.kind()) {
    case Predicate::Kind::kAnd:
    case Predicate::Kind::kOr:
      return absl::StrCat("(", child.ToString(), ")");
    default:
      return child.ToString();
  }
}

}  // namespace

Predicate::Predicate() : node_(True().node_) {}

Predicate Predicate::True() {
  static const std::shared_ptr<const Node>* const kTrue =
      new std::shared_ptr<const Node>(std::make_shared<Node>());
  return Predicate(*kTrue);
}

Predicate Predicate::HasLabel(std::string key, std::string value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kHasLabel;
  node->key = std::move(key);
  node->value = std::move(value);
  return Predicate(std::move(node));
}

Predicate Predicate::AttrIntersects(std::set<std::string> attributes) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kAttrIntersects;
  node->attributes = std::move(attributes);
  return Predicate(std::move(node));
}

Predicate Predicate::And(std::vector<Predicate> children) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kAnd;
  node->children = std::move(children);
  return Predicate(std::move(node));
}

Predicate Predicate::Or(std::vector<Predicate> children) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kOr;
  node->children = std::move(children);
  return Predicate(std::move(node));
}

Predicate Predicate::Not(Predicate child) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kNot;
  node->children.push_back(std::move(child));
  return Predicate(std::move(node));
}

absl::StatusOr<Predicate> Predicate::Parse(absl::string_view text) {
  return Parser(text).ParseAll();
}

Predicate::Kind Predicate::kind() const { return node_->kind; }

const std::string& Predicate::key() const {
  return node_->kind == Kind::kHasLabel ? node_->key : EmptyString();
}

const std::string& Predicate::value() const {
  return node_->kind == Kind::kHasLabel ? node_->value : EmptyString();
}

const std::set<std::string>& Predicate::attributes() const {
  return node_->attributes;
}

const std::vector<Predicate>& Predicate::children() const {
  return node_->children;
}

bool Predicate::Evaluate(const LabelSet& labels) const {
  switch (node_->kind) {
    case Kind::kTrue:
      return true;
    case Kind::kHasLabel:
      return labels.Has(node_->key, node_->value);
    case Kind::kAttrIntersects: {
      const std::set<std::string>& attrs = labels.Values(kAttributeKey);
      // Iterate the smaller set.
      if (attrs.size() < node_->attributes.size()) {
        return std::any_of(attrs.begin(), attrs.end(), [this](const auto& a) {
          return node_->attributes.contains(a);
        });
      }
      return std::any_of(node_->attributes.begin(), node_->attributes.end(),
                         [&attrs](const auto& a) { return attrs.contains(a); });
    }
    case Kind::kAnd:
      return std::all_of(
          node_->children.begin(), node_->children.end(),
          [&labels](const Predicate& c) { return c.Evaluate(labels); });
    case Kind::kOr:
      return std::any_of(
          node_->children.begin(), node_->children.end(),
          [&labels](const Predicate& c) { return c.Evaluate(labels); });
    case Kind::kNot:
      return !node_->children.front().Evaluate(labels);
  }
  return false;
}

std::string Predicate::ToString() const {
  switch (node_->kind) {
    case Kind::kTrue:
      return "true";
    case Kind::kHasLabel:
      return absl::StrCat(node_->key, " == ", node_->value);
    case Kind::kAttrIntersects:
      return absl::StrCat(kAttributeKey, " in {",
                          absl::StrJoin(node_->attributes, ", "), "}");
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<std::string> parts;
      for (const Predicate& child : node_->children) {
        parts.push_back(ChildString(child));
      }
      return absl::StrJoin(parts, node_->kind == Kind::kAnd ? " && " : " || ");
    }
    case Kind::kNot:
      return absl::StrCat("!", ChildString(node_->children.front()));
  }
  return "";
}

bool Predicate::operator==(const Predicate& other) const {
  if (node_ == other.node_) return true;
  return node_->kind == other.node_->kind && node_->key == other.node_->key &&
         node_->value == other.node_->value &&
         node_->attributes == other.node_->attributes &&
         node_->children == other.node_->children;
}

bool EvalPredicate(const Predicate& predicate, const LabelSet& labels) {
  return predicate.Evaluate(labels);
}

std::optional<bool> SyntacticallyImplies(const Predicate& lhs,
                                         const Predicate& rhs) {
  std::optional<std::vector<Predicate>> rhs_atoms = ConjunctiveAtoms(rhs);
  if (rhs_atoms.has_value() && rhs_atoms->empty()) return true;
  std::optional<std::vector<Predicate>> lhs_atoms = ConjunctiveAtoms(lhs);
  if (!lhs_atoms.has_value() || !rhs_atoms.has_value()) return std::nullopt;
  // An empty attribute set never matches, so it implies everything.
  for (const Predicate& a : *lhs_atoms) {
    if (a.kind() == Predicate::Kind::kAttrIntersects &&
        a.attributes().empty()) {
      return true;
    }
  }
  for (const Predicate& b : *rhs_atoms) {
    bool implied =
        std::any_of(lhs_atoms->begin(), lhs_atoms->end(),
                    [&b](const Predicate& a) { return AtomImplies(a, b); });
    if (!implied) return false;
  }
  return true;
}

}  // namespace policy_engine
