#include "deltarep/schema.hpp"

#include <unordered_set>

#include "deltarep/errors.hpp"

namespace deltarep {

RelationSchema::RelationSchema(std::string name, std::vector<Attribute> attrs)
    : name_(std::move(name)), attrs_(std::move(attrs)) {
    if (name_.empty()) throw Error("relation name must not be empty");
    std::unordered_set<std::string> seen;
    for (const Attribute& a : attrs_)
        if (!seen.insert(a.name).second)
            throw Error("relation " + name_ + ": duplicate attribute " + a.name);
}

std::optional<std::uint32_t> RelationSchema::attribute_index(const std::string& attr_name) const {
    for (std::uint32_t i = 0; i < attrs_.size(); ++i)
        if (attrs_[i].name == attr_name) return i;
    return std::nullopt;
}

Schema::Schema(std::vector<RelationSchema> relations) : relations_(std::move(relations)) {
    for (std::uint32_t i = 0; i < relations_.size(); ++i)
        if (!by_name_.emplace(relations_[i].name(), i).second)
            throw Error("duplicate relation " + relations_[i].name());
}

std::optional<std::uint32_t> Schema::relation_id(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

}  // namespace deltarep
