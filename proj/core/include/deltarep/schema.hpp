#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "deltarep/value.hpp"

namespace deltarep {

struct Attribute {
    std::string name;
    ValueKind kind;
    bool operator==(const Attribute&) const = default;
};

/// Relation name plus its ordered, named, typed attributes.
class RelationSchema {
  public:
    RelationSchema(std::string name, std::vector<Attribute> attrs);

    const std::string& name() const { return name_; }
    std::uint32_t arity() const { return static_cast<std::uint32_t>(attrs_.size()); }
    const std::vector<Attribute>& attributes() const { return attrs_; }
    const Attribute& attribute(std::uint32_t i) const { return attrs_.at(i); }
    std::optional<std::uint32_t> attribute_index(const std::string& attr_name) const;

    bool operator==(const RelationSchema&) const = default;

  private:
    std::string name_;
    std::vector<Attribute> attrs_;
};

/// Immutable set of relation schemas; relations keep their declaration order,
/// which is also the id space used by TupleId.
class Schema {
  public:
    explicit Schema(std::vector<RelationSchema> relations);

    std::uint32_t relation_count() const { return static_cast<std::uint32_t>(relations_.size()); }
    const RelationSchema& relation(std::uint32_t id) const { return relations_.at(id); }
    std::optional<std::uint32_t> relation_id(const std::string& name) const;
    const std::vector<RelationSchema>& relations() const { return relations_; }

    bool operator==(const Schema& o) const { return relations_ == o.relations_; }

  private:
    std::vector<RelationSchema> relations_;
    std::unordered_map<std::string, std::uint32_t> by_name_;
};

using SchemaPtr = std::shared_ptr<const Schema>;

}  // namespace deltarep
