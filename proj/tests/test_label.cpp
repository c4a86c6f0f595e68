#include <gtest/gtest.h>

#include "loe/error.hpp"
#include "loe/label.hpp"

using namespace loe;

TEST(Label, ParsesEveryBandWithItsOrdinal) {
    const char* names[] = {"1a", "1b", "2a", "2b", "3a", "3b", "4"};
    for (int i = 0; i < 7; ++i) {
        const auto label = parse_label(names[i]);
        EXPECT_EQ(label.ordinal(), i);
        EXPECT_EQ(label.name(), names[i]);
        EXPECT_EQ(LoELabel::from_ordinal(i), label);
    }
    EXPECT_EQ(parse_label("1a").ordinal(), 0);
    EXPECT_EQ(parse_label("4").ordinal(), 6);
}

TEST(Label, ParsingIsCaseInsensitive) {
    EXPECT_EQ(parse_label("2B"), LoELabel(Band::L2b));
    EXPECT_EQ(try_parse_label("3A"), LoELabel(Band::L3a));
}

TEST(Label, RejectsUnknownTextNamingIt) {
    for (const char* bad : {"5", "", "1c", "0", "1a ", "level 1a"}) {
        EXPECT_THROW(parse_label(bad), DataError) << bad;
        EXPECT_FALSE(try_parse_label(bad).has_value()) << bad;
    }
    try {
        parse_label("5");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("'5'"), std::string::npos);
    }
}

TEST(Label, OrdinalBijectionRoundTrips) {
    for (int i = 0; i < 7; ++i) {
        const auto label = LoELabel::from_ordinal(i);
        EXPECT_EQ(parse_label(label.name()).ordinal(), i);
    }
    EXPECT_THROW(LoELabel::from_ordinal(-1), InvalidArgument);
    EXPECT_THROW(LoELabel::from_ordinal(7), InvalidArgument);
}

TEST(Label, LowerOrdinalIsStrongerEvidence) {
    EXPECT_LT(LoELabel(Band::L1a), LoELabel(Band::L4));
    EXPECT_LT(LoELabel(Band::L2b), LoELabel(Band::L3a));
}

TEST(Label, ArgmaxBreaksTiesTowardLowerOrdinal) {
    EXPECT_EQ(argmax_label({0.1, 0.5, 0.5, 0, 0, 0, 0}), LoELabel(Band::L1b));
    EXPECT_EQ(argmax_label({0, 0, 0, 0, 0, 0, 0}), LoELabel(Band::L1a));
    EXPECT_EQ(argmax_label({0, 0, 0, 0, 0, 0.2, 0.9}), LoELabel(Band::L4));
}
