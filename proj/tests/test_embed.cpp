#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "hhgen/embed/cache.hpp"
#include "hhgen/embed/mock.hpp"
#include "hhgen/embed/standardize.hpp"
#include "hhgen/stats/cosine.hpp"
#include "hhgen/util/rng.hpp"

using namespace hhgen;
using namespace hhgen::embed;
using fixture::code_of;

TEST(MockEmbedder, HashedBagOfTokens) {
  MockEmbedder e;
  const auto v = e.embed_text("Kitchen kitchen stove");
  ASSERT_EQ(v.size(), kMockDimension);
  // Two hits in one bucket and one in another: weights 2/sqrt(5), 1/sqrt(5).
  ASSERT_NE(mock_bucket("kitchen"), mock_bucket("stove"));
  EXPECT_NEAR(v[mock_bucket("kitchen")], 2 / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(v[mock_bucket("stove")], 1 / std::sqrt(5.0), 1e-12);
  EXPECT_EQ(code_of([&] { e.embed_text("!!"); }), ErrorCode::zero_vector);
  EXPECT_EQ(code_of([&] { e.embed_text(""); }), ErrorCode::precondition);
}

TEST(MockEmbedder, CosineMatchesTokenOverlap) {
  MockEmbedder e;
  ASSERT_NE(mock_bucket("bed"), mock_bucket("lamp"));
  ASSERT_NE(mock_bucket("bed"), mock_bucket("desk"));
  ASSERT_NE(mock_bucket("lamp"), mock_bucket("desk"));
  EXPECT_NEAR(text_similarity(e, "bed lamp", "bed desk"), 0.5, 1e-12);
  EXPECT_NEAR(text_similarity(e, "bed", "BED"), 1.0, 1e-12);
  EXPECT_NEAR(text_similarity(e, "lamp", "desk"), 0.0, 1e-12);
}

TEST(MockEmbedder, TextOnlyProviderHasNoImages) {
  MockEmbedder e;
  EXPECT_FALSE(e.has_image_capability());
  EXPECT_EQ(code_of([&] { e.embed_image_text_pair("plan", "text"); }), ErrorCode::capability_missing);
}

TEST(MockImageEmbedder, PlanLabelsDriveTheImageVector) {
  const std::string plan =
      "# floorplan 4.0 x 2.0 m, cell 0.5 m\n+--+\n|AB|\n+--+\nlegend:\nA r0 kitchen (kitchen)\nB r1 living room (living)\n"
      "doors:\nr0-r1 archway\n";
  EXPECT_EQ(floorplan_room_labels(plan), (std::vector<std::string>{"kitchen", "living room"}));
  MockImageEmbedder e;
  const auto [img, txt] = e.embed_image_text_pair(plan, "kitchen living room");
  EXPECT_NEAR(stats::cosine(img, txt), 1.0, 1e-12);
  const auto [img2, txt2] = e.embed_image_text_pair(plan, "garage");
  EXPECT_LT(stats::cosine(img2, txt2), 0.5);
}

TEST(Standardize, NamesAndRoomLabels) {
  const std::vector<std::string> names{"Ana", "Anabel"};
  const std::map<std::string, std::string> rooms{{"Ana's studio", "studio"}, {"studio", "hobby room"}};
  EXPECT_EQ(standardize_description("Anabel paints in Ana's studio; Ana naps.", names, rooms),
            "resident-2 paints in hobby room; resident-1 naps.");
  EXPECT_EQ(standardize_description("ana", names, rooms), "ana");
  // Replacements are never rescanned: a label mapped to a name stays put.
  EXPECT_EQ(standardize_description("den", {"Ana"}, {{"den", "Ana"}}), "Ana");
}

TEST(Standardize, IdempotentOnRandomText) {
  const std::vector<std::string> names{"Ana", "Ben"};
  const std::map<std::string, std::string> rooms{{"Ana's bedroom", "bedroom"}};
  const std::vector<std::string> words{"Ana", "Ben", "Ana's bedroom", "kitchen", "reads", " ", "."};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    std::string text;
    for (int i = 0; i < 30; ++i) text += rng.pick(words);
    const auto once = standardize_description(text, names, rooms);
    EXPECT_EQ(standardize_description(once, names, rooms), once);
    EXPECT_EQ(once.find("Ana"), std::string::npos);
    EXPECT_EQ(once.find("Ben"), std::string::npos);
  }
}

TEST(Cache, MemoizesAndPersists) {
  const auto dir = std::filesystem::temp_directory_path() / "hhgen_cache_test";
  std::filesystem::remove_all(dir);
  auto inner = std::make_shared<MockEmbedder>();
  CachedEmbedder c(inner, dir.string());
  const auto v = c.embed_text("double bed");
  EXPECT_EQ(c.embed_text("double bed"), v);
  EXPECT_EQ(c.misses(), 1u);
  EXPECT_TRUE(std::filesystem::exists(dir / (CachedEmbedder::key(inner->id(), "double bed") + ".json")));
  CachedEmbedder warm(inner, dir.string());
  EXPECT_EQ(warm.embed_text("double bed"), v);
  EXPECT_EQ(warm.misses(), 0u);
  EXPECT_NE(CachedEmbedder::key("a", "b"), CachedEmbedder::key("a\nb", ""));
  std::filesystem::remove_all(dir);
}
