#pragma once
// Twenty token lists with emotion counts tallied by hand against a ten-word lexicon.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "leaders/emotion/emotion.hpp"

namespace leaders::testing {

inline emotion::EmotionLexicon hand_lexicon() {
    using emotion::Emotion;
    emotion::EmotionLexicon lex;
    lex.add("fear", Emotion::fear);
    lex.add("hope", Emotion::anticipation);
    lex.add("hope", Emotion::trust);
    lex.add("angry", Emotion::anger);
    lex.add("sick", Emotion::disgust);
    lex.add("sick", Emotion::fear);
    lex.add("sick", Emotion::sadness);
    lex.add("happy", Emotion::anticipation);
    lex.add("happy", Emotion::joy);
    lex.add("happy", Emotion::trust);
    lex.add("wow", Emotion::surprise);
    lex.add("cry", Emotion::sadness);
    lex.add("vile", Emotion::anger);
    lex.add("vile", Emotion::disgust);
    lex.add("safe", Emotion::joy);
    lex.add("safe", Emotion::trust);
    lex.add("panic", Emotion::fear);
    return lex;
}

struct HandCountedTweet {
    std::vector<std::string> tokens;
    // anger, anticipation, disgust, fear, joy, sadness, surprise, trust
    std::array<std::uint32_t, 8> counts;
};

inline std::vector<HandCountedTweet> hand_counted_tweets() {
    return {
        {{"fear", "fear", "hope"}, {0, 1, 0, 1, 0, 0, 0, 1}},
        {{}, {0, 0, 0, 0, 0, 0, 0, 0}},
        {{"mask", "home"}, {0, 0, 0, 0, 0, 0, 0, 0}},
        {{"angry", "vile"}, {2, 0, 1, 0, 0, 0, 0, 0}},
        {{"sick", "sick", "cry"}, {0, 0, 1, 1, 0, 2, 0, 0}},
        {{"happy", "hope", "safe"}, {0, 2, 0, 0, 2, 0, 0, 3}},
        {{"wow"}, {0, 0, 0, 0, 0, 0, 1, 0}},
        {{"panic", "fear", "sick"}, {0, 0, 1, 3, 0, 1, 0, 0}},
        {{"wow", "wow", "wow", "happy"}, {0, 1, 0, 0, 1, 0, 1, 1}},
        {{"vile", "sick", "angry", "cry"}, {2, 0, 2, 1, 0, 2, 0, 0}},
        {{"hopeful", "fearless"}, {0, 0, 0, 0, 0, 0, 0, 0}},
        {{"safe", "safe", "panic"}, {0, 0, 0, 1, 1, 0, 0, 1}},
        {{"cry", "hope", "wow"}, {0, 1, 0, 0, 0, 1, 1, 1}},
        {{"angry", "happy"}, {1, 1, 0, 0, 1, 0, 0, 1}},
        {{"sick", "panic", "fear", "cry"}, {0, 0, 1, 3, 0, 2, 0, 0}},
        {{"vile"}, {1, 0, 1, 0, 0, 0, 0, 0}},
        {{"hope", "happy", "safe", "wow", "angry"}, {1, 2, 0, 0, 2, 0, 1, 3}},
        {{"home", "stay", "safe"}, {0, 0, 0, 0, 1, 0, 0, 1}},
        {{"fear", "panic", "panic", "fear"}, {0, 0, 0, 2, 0, 0, 0, 0}},
        {{"fear", "hope", "angry", "sick", "happy", "wow", "cry", "vile", "safe", "panic"}, {2, 2, 2, 3, 2, 2, 1, 3}},
    };
}

}  // namespace leaders::testing
