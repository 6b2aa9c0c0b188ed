#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deltarep/schema.hpp"
#include "deltarep/value.hpp"

namespace deltarep {

/// Stable tuple identity: relation id (declaration order in the schema) plus
/// the zero-based ordinal the tuple received when its relation was loaded.
/// Ids never change while tuples move between the live side and the deleted
/// side; the deleted copy of tuple t is its delta image and shares t's id.
struct TupleId {
    std::uint32_t relation = 0;
    std::uint32_t ordinal = 0;

    bool operator==(const TupleId&) const = default;
    auto operator<=>(const TupleId&) const = default;
};

struct TupleIdHash {
    std::size_t operator()(TupleId id) const {
        return (static_cast<std::size_t>(id.relation) << 32) | id.ordinal;
    }
};

struct Tuple {
    TupleId id;
    std::vector<Value> values;
};

/// A database state: for every relation the tuples that are live (base) and
/// the tuples that have been deleted (the delta side).  Instances are values;
/// every transform returns a fresh instance and row storage is shared, so
/// copies cost O(bitset), not O(data).
///
/// Invariants: live and deleted are disjoint, and both only ever contain
/// tuples that were present when the instance was first built.
class DatabaseInstance {
  public:
    /// Builds an all-live instance.  `rows_per_relation` is indexed by
    /// relation id; duplicate value vectors within a relation collapse to the
    /// first occurrence (set semantics), ordinals count the retained rows.
    static DatabaseInstance from_rows(SchemaPtr schema,
                                      std::vector<std::vector<std::vector<Value>>> rows_per_relation);

    const SchemaPtr& schema() const { return schema_; }
    std::uint32_t relation_count() const { return schema_->relation_count(); }

    /// Every tuple ever loaded into `relation`, ordered by ordinal.
    std::span<const Tuple> rows(std::uint32_t relation) const { return *rows_[relation]; }

    bool contains(TupleId id) const;          // loaded at all (either side)
    bool is_live(TupleId id) const;           // on the base side
    bool is_deleted(TupleId id) const;        // on the delta side
    const Tuple& tuple(TupleId id) const;     // throws UnknownTupleError

    std::size_t live_count() const;
    std::size_t deleted_count() const;
    std::vector<TupleId> live_ids() const;     // sorted
    std::vector<TupleId> deleted_ids() const;  // sorted

    /// Looks a live-or-deleted tuple up by content.
    std::optional<TupleId> find(std::uint32_t relation, const std::vector<Value>& values) const;

    /// Human-readable stable name, "Relation:ordinal".
    std::string label(TupleId id) const;
    /// Parses a label produced by label(); nullopt when the relation is
    /// unknown or the text is not of the form Name:number.
    std::optional<TupleId> parse_label(const std::string& text) const;

    bool same_origin(const DatabaseInstance& o) const;  // same schema and loaded rows

    friend DatabaseInstance apply_deletion(const DatabaseInstance&, std::span<const TupleId>);

  private:
    DatabaseInstance() = default;

    SchemaPtr schema_;
    std::vector<std::shared_ptr<const std::vector<Tuple>>> rows_;
    std::vector<std::vector<bool>> live_;
    std::vector<std::vector<bool>> deleted_;
};

/// Moves every tuple in `tuples` from the live side to the delta side.
/// Throws UnknownTupleError when a tuple is not currently live.
DatabaseInstance apply_deletion(const DatabaseInstance& db, std::span<const TupleId> tuples);

/// A fresh all-live instance over db's live side only: the delta side is
/// discarded and ordinals are reassigned by live order.  This re-founds a
/// previously repaired database as a new initial state.
DatabaseInstance strip_deleted(const DatabaseInstance& db);
DatabaseInstance apply_deletion(const DatabaseInstance& db, const std::vector<TupleId>& tuples);

/// Tuples live in `before` but not in `after`, sorted by id.
/// Throws SchemaMismatchError when the instances were not loaded from the
/// same origin.
std::vector<TupleId> snapshot_diff(const DatabaseInstance& before, const DatabaseInstance& after);

}  // namespace deltarep
