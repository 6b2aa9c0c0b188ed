#include "deltarep/instance.hpp"

#include <algorithm>
#include <unordered_map>

#include "deltarep/errors.hpp"

namespace deltarep {

DatabaseInstance DatabaseInstance::from_rows(
    SchemaPtr schema, std::vector<std::vector<std::vector<Value>>> rows_per_relation) {
    if (!schema) throw Error("null schema");
    if (rows_per_relation.size() != schema->relation_count())
        throw SchemaMismatchError("row groups do not match schema relation count");

    DatabaseInstance db;
    db.schema_ = std::move(schema);
    db.rows_.resize(db.schema_->relation_count());
    db.live_.resize(db.schema_->relation_count());
    db.deleted_.resize(db.schema_->relation_count());

    for (std::uint32_t r = 0; r < db.schema_->relation_count(); ++r) {
        const RelationSchema& rs = db.schema_->relation(r);
        auto stored = std::make_shared<std::vector<Tuple>>();
        std::unordered_map<std::vector<Value>, std::uint32_t, ValueVectorHash> seen;
        for (auto& values : rows_per_relation[r]) {
            if (values.size() != rs.arity())
                throw SchemaMismatchError("relation " + rs.name() + ": row arity " +
                                          std::to_string(values.size()) + " != " +
                                          std::to_string(rs.arity()));
            for (std::uint32_t i = 0; i < values.size(); ++i)
                if (values[i].kind() != rs.attribute(i).kind)
                    throw SchemaMismatchError("relation " + rs.name() + ", attribute " +
                                              rs.attribute(i).name + ": value kind mismatch");
            if (seen.contains(values)) continue;  // duplicates collapse
            std::uint32_t ord = static_cast<std::uint32_t>(stored->size());
            seen.emplace(values, ord);
            stored->push_back(Tuple{TupleId{r, ord}, std::move(values)});
        }
        db.live_[r].assign(stored->size(), true);
        db.deleted_[r].assign(stored->size(), false);
        db.rows_[r] = std::move(stored);
    }
    return db;
}

bool DatabaseInstance::contains(TupleId id) const {
    return id.relation < rows_.size() && id.ordinal < rows_[id.relation]->size();
}

bool DatabaseInstance::is_live(TupleId id) const {
    return contains(id) && live_[id.relation][id.ordinal];
}

bool DatabaseInstance::is_deleted(TupleId id) const {
    return contains(id) && deleted_[id.relation][id.ordinal];
}

const Tuple& DatabaseInstance::tuple(TupleId id) const {
    if (!contains(id))
        throw UnknownTupleError("no tuple with id " + std::to_string(id.relation) + ":" +
                                std::to_string(id.ordinal));
    return (*rows_[id.relation])[id.ordinal];
}

std::size_t DatabaseInstance::live_count() const {
    std::size_t n = 0;
    for (const auto& bits : live_) n += std::count(bits.begin(), bits.end(), true);
    return n;
}

std::size_t DatabaseInstance::deleted_count() const {
    std::size_t n = 0;
    for (const auto& bits : deleted_) n += std::count(bits.begin(), bits.end(), true);
    return n;
}

std::vector<TupleId> DatabaseInstance::live_ids() const {
    std::vector<TupleId> out;
    for (std::uint32_t r = 0; r < live_.size(); ++r)
        for (std::uint32_t i = 0; i < live_[r].size(); ++i)
            if (live_[r][i]) out.push_back(TupleId{r, i});
    return out;
}

std::vector<TupleId> DatabaseInstance::deleted_ids() const {
    std::vector<TupleId> out;
    for (std::uint32_t r = 0; r < deleted_.size(); ++r)
        for (std::uint32_t i = 0; i < deleted_[r].size(); ++i)
            if (deleted_[r][i]) out.push_back(TupleId{r, i});
    return out;
}

std::optional<TupleId> DatabaseInstance::find(std::uint32_t relation,
                                              const std::vector<Value>& values) const {
    if (relation >= rows_.size()) return std::nullopt;
    for (const Tuple& t : *rows_[relation])
        if (t.values == values) return t.id;
    return std::nullopt;
}

std::string DatabaseInstance::label(TupleId id) const {
    if (!contains(id)) throw UnknownTupleError("label: unknown tuple id");
    return schema_->relation(id.relation).name() + ":" + std::to_string(id.ordinal);
}

std::optional<TupleId> DatabaseInstance::parse_label(const std::string& text) const {
    auto colon = text.rfind(':');
    if (colon == std::string::npos || colon + 1 >= text.size()) return std::nullopt;
    auto rel = schema_->relation_id(text.substr(0, colon));
    if (!rel) return std::nullopt;
    std::uint32_t ord = 0;
    for (std::size_t i = colon + 1; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') return std::nullopt;
        ord = ord * 10 + static_cast<std::uint32_t>(text[i] - '0');
    }
    TupleId id{*rel, ord};
    if (!contains(id)) return std::nullopt;
    return id;
}

bool DatabaseInstance::same_origin(const DatabaseInstance& o) const {
    if (!(*schema_ == *o.schema_)) return false;
    for (std::uint32_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r] == o.rows_[r]) continue;  // shared storage
        if (rows_[r]->size() != o.rows_[r]->size()) return false;
        for (std::size_t i = 0; i < rows_[r]->size(); ++i)
            if ((*rows_[r])[i].values != (*o.rows_[r])[i].values) return false;
    }
    return true;
}

DatabaseInstance apply_deletion(const DatabaseInstance& db, std::span<const TupleId> tuples) {
    DatabaseInstance next = db;
    for (TupleId id : tuples) {
        if (!next.is_live(id))
            throw UnknownTupleError("apply_deletion: tuple " +
                                    (next.contains(id) ? next.label(id) + " is not live"
                                                       : std::string("id out of range")));
        next.live_[id.relation][id.ordinal] = false;
        next.deleted_[id.relation][id.ordinal] = true;
    }
    return next;
}

DatabaseInstance apply_deletion(const DatabaseInstance& db, const std::vector<TupleId>& tuples) {
    return apply_deletion(db, std::span<const TupleId>(tuples));
}

DatabaseInstance strip_deleted(const DatabaseInstance& db) {
    std::vector<std::vector<std::vector<Value>>> rows(db.relation_count());
    for (TupleId id : db.live_ids()) rows[id.relation].push_back(db.tuple(id).values);
    return DatabaseInstance::from_rows(db.schema(), std::move(rows));
}

std::vector<TupleId> snapshot_diff(const DatabaseInstance& before, const DatabaseInstance& after) {
    if (!before.same_origin(after))
        throw SchemaMismatchError("snapshot_diff: instances have different origins");
    std::vector<TupleId> out;
    for (TupleId id : before.live_ids())
        if (!after.is_live(id)) out.push_back(id);
    return out;  // live_ids() is already sorted
}

}  // namespace deltarep
