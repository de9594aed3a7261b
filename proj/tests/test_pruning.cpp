#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "ctfa/pruning.hpp"
#include "support/oracles.hpp"

using namespace ctfa;

static AttackEvent ev(std::string from, std::string to, std::string hash, std::int64_t t) {
    AttackEvent e;
    e.from_team = std::move(from);
    e.to_team = std::move(to);
    e.payload_hash = std::move(hash);
    e.time = t;
    e.svc = "02345";
    return e;
}

static const std::string kHash = md5_digest(std::string("p"));

TEST_CASE("majority pruning keeps the most frequent team's events") {
    std::vector<AttackEvent> events{
        ev("A", "T", kHash, 1), ev("A", "T", kHash, 2), ev("A", "T", kHash, 5),
        ev("B", "T", kHash, 3),
    };
    auto ann = annotate(events);
    auto kept = prune(events, ann, {PruneKind::AllButMajority});
    REQUIRE(kept.size() == 3);
    for (const auto& e : kept) CHECK(e.from_team == "A");
}

TEST_CASE("earliest/most-recent pruning follow the documented trace") {
    std::vector<AttackEvent> events{
        ev("A", "T", kHash, 1), ev("A", "T", kHash, 2),
        ev("B", "T", kHash, 3), ev("C", "T", kHash, 4),
    };
    auto ann = annotate(events);
    auto p3 = prune(events, ann, {PruneKind::AllButEarliest});
    REQUIRE(p3.size() == 2);
    CHECK(p3[0].from_team == "A");
    CHECK(p3[1].from_team == "A");
    auto p4 = prune(events, ann, {PruneKind::AllButMostRecent});
    REQUIRE(p4.size() == 1);
    CHECK(p4[0].from_team == "C");
}

TEST_CASE("earliest pruning is the identity without deception") {
    std::vector<AttackEvent> events;
    for (int i = 0; i < 20; ++i)
        events.push_back(ev("A", "T", md5_digest(std::to_string(i % 5)), i));
    auto ann = annotate(events);
    CHECK(prune(events, ann, {PruneKind::AllButEarliest}) == events);
    CHECK(prune(events, ann, {PruneKind::None}) == events);
}

TEST_CASE("length mismatch between events and annotations is an error") {
    std::vector<AttackEvent> events{ev("A", "T", kHash, 1)};
    std::vector<DeceptionAnnotation> ann;
    CHECK_THROWS_AS(prune(events, ann, {PruneKind::AllButMajority}), UnannotatedEvents);
}

TEST_CASE("strategy parsing") {
    CHECK(PruningStrategy::parse("none")->kind == PruneKind::None);
    CHECK(PruningStrategy::parse("p1")->kind == PruneKind::AllButMajority);
    CHECK(PruningStrategy::parse("p2:3")->k == 3);
    CHECK(PruningStrategy::parse("p3")->kind == PruneKind::AllButEarliest);
    CHECK(PruningStrategy::parse("p4")->kind == PruneKind::AllButMostRecent);
    CHECK(!PruningStrategy::parse("p2:0").has_value());
    CHECK(!PruningStrategy::parse("p9").has_value());
    CHECK(PruningStrategy::parse("p2:3")->name() == "p2:3");
}

TEST_CASE("pruning matches the brute-force oracle on random inputs") {
    Rng rng(31337);
    const std::vector<PruningStrategy> strategies = {
        {PruneKind::None},         {PruneKind::AllButMajority},
        {PruneKind::AllButKMajority, 1}, {PruneKind::AllButKMajority, 2},
        {PruneKind::AllButKMajority, 3}, {PruneKind::AllButEarliest},
        {PruneKind::AllButMostRecent},
    };
    for (int trial = 0; trial < 150; ++trial) {
        auto events = oracle::random_events(rng);
        auto ann = annotate(events);
        for (const auto& strategy : strategies) {
            INFO("trial " << trial << " strategy " << strategy.name());
            CHECK(prune_indices(events, ann, strategy) == oracle::prune_indices(events, strategy));
        }
    }
}

TEST_CASE("pruning invariants on random inputs") {
    Rng rng(424242);
    for (int trial = 0; trial < 60; ++trial) {
        auto events = oracle::random_events(rng);
        auto ann = annotate(events);

        // P-2(1) == P-1
        CHECK(prune_indices(events, ann, {PruneKind::AllButKMajority, 1}) ==
              prune_indices(events, ann, {PruneKind::AllButMajority}));

        // P-2(k) keeps at most k teams per group; large k is the identity
        for (int k : {1, 2, 3}) {
            auto kept = prune_indices(events, ann, {PruneKind::AllButKMajority, k});
            std::map<std::pair<std::string, std::string>, std::set<std::string>> teams;
            for (std::size_t i : kept)
                teams[{events[i].to_team, events[i].payload_hash}].insert(events[i].from_team);
            for (const auto& [key, t] : teams) CHECK(t.size() <= static_cast<std::size_t>(k));
        }
        auto identity = prune_indices(events, ann, {PruneKind::AllButKMajority, 1000});
        CHECK(identity.size() == events.size());

        // P-3 removes exactly the deceptive roles
        auto p3 = prune_indices(events, ann, {PruneKind::AllButEarliest});
        std::set<std::size_t> kept_set(p3.begin(), p3.end());
        for (std::size_t i = 0; i < events.size(); ++i) {
            bool deceptive = ann[i].role == Role::DeceptiveFirst ||
                             ann[i].role == Role::DeceptiveDuplicate;
            CHECK(kept_set.contains(i) == !deceptive);
        }

        // kept indices are strictly ascending: order preserved, no duplicates
        for (const auto& strategy :
             {PruningStrategy{PruneKind::AllButMajority}, PruningStrategy{PruneKind::AllButMostRecent}}) {
            auto kept = prune_indices(events, ann, strategy);
            for (std::size_t i = 1; i < kept.size(); ++i) CHECK(kept[i - 1] < kept[i]);
        }
    }
}
