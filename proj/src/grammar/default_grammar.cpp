// Copyright 2026 The hbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

// Embedded grammars. Every sentence has exactly one of five shapes (no
// modifier, PP or RC on the subject, PP or RC on the object); relative
// clauses are subject relatives. Node labels follow the CATEGORY_feature
// convention the annotator depends on: S (main clause), NP, PP, RC.

#include <string>

#include "hbias/errors.hpp"
#include "hbias/grammar/grammar.hpp"

namespace hbias {
namespace {

constexpr const char* kLexicon = R"(# 75 surface forms
DET: the my your some
N_SG: zebra yak newt walrus peacock raven unicorn vulture orangutan salamander quail
N_PL: zebras yaks newts walruses peacocks ravens unicorns vultures orangutans salamanders quails
AUX_SG: does doesn't
AUX_PL: do don't
AUX_PAST: did
V_INTR_STEM: chuckle giggle dance fly read swim sleep
V_INTR_PRES_SG: chuckles giggles dances flies reads swims sleeps
V_INTR_PRES_PL: chuckle giggle dance fly read swim sleep
V_INTR_PAST: chuckled giggled danced flew read swam slept
V_TRANS_STEM: see admire amuse entertain
V_TRANS_PRES_SG: sees admires amuses entertains
V_TRANS_PRES_PL: see admire amuse entertain
V_TRANS_PAST: saw admired amused entertained
P: by near behind with
REL: who that
PUNCT_DECL: .
PUNCT_QUEST: ?
TASK: decl quest past present
)";

constexpr const char* kReducedLexicon = R"(# 20 surface forms
DET: the
N_SG: yak
N_PL: yaks
AUX_SG: does doesn't
AUX_PL: do don't
V_INTR_STEM: read
V_INTR_PRES_SG: reads
V_INTR_PRES_PL: read
V_INTR_PAST: read
V_TRANS_STEM: see
V_TRANS_PRES_SG: sees
V_TRANS_PRES_PL: see
V_TRANS_PAST: saw
P: by
REL: who
PUNCT_DECL: .
PUNCT_QUEST: ?
TASK: decl quest past present
)";

constexpr const char* kShapes = R"(# sentence shapes, uniform
ROOT -> DECL_NONE [1]
ROOT -> DECL_PPS [1]
ROOT -> DECL_PPO [1]
ROOT -> DECL_RCS [1]
ROOT -> DECL_RCO [1]
DECL_NONE -> S_NONE PUNCT_DECL
DECL_PPS -> S_PPS PUNCT_DECL
DECL_PPO -> S_PPO PUNCT_DECL
DECL_RCS -> S_RCS PUNCT_DECL
DECL_RCO -> S_RCO PUNCT_DECL
)";

constexpr const char* kNounPhrases = R"(# noun phrases
NP_SG -> DET N_SG
NP_PL -> DET N_PL
NP_ANY -> NP_SG
NP_ANY -> NP_PL
NP_PP_SG -> NP_SG PP
NP_PP_PL -> NP_PL PP
NP_PP_ANY -> NP_PP_SG
NP_PP_ANY -> NP_PP_PL
NP_RC_ANY -> NP_RC_SG
NP_RC_ANY -> NP_RC_PL
PP -> P NP_ANY
)";

// Auxiliary + stem predicates; auxiliaries agree with their subject.
constexpr const char* kQuestionClauses = R"(# question-formation clauses
S_NONE -> NP_SG VP_SG
S_NONE -> NP_PL VP_PL
S_PPS -> NP_PP_SG VP_SG
S_PPS -> NP_PP_PL VP_PL
S_RCS -> NP_RC_SG VP_SG
S_RCS -> NP_RC_PL VP_PL
S_PPO -> NP_SG VP_OPP_SG
S_PPO -> NP_PL VP_OPP_PL
S_RCO -> NP_SG VP_ORC_SG
S_RCO -> NP_PL VP_ORC_PL
NP_RC_SG -> NP_SG RC_SG
NP_RC_PL -> NP_PL RC_PL
RC_SG -> REL VP_SG
RC_PL -> REL VP_PL
VP_SG -> AUX_SG VB
VP_PL -> AUX_PL VB
VP_OPP_SG -> AUX_SG VB_TPP
VP_OPP_PL -> AUX_PL VB_TPP
VP_ORC_SG -> AUX_SG VB_TRC
VP_ORC_PL -> AUX_PL VB_TRC
)";

constexpr const char* kStemPredicates = R"(# bare-stem verb phrases
VB -> V_INTR_STEM [1]
VB -> VB_T [1]
VB_T -> V_TRANS_STEM NP_ANY
VB_TPP -> V_TRANS_STEM NP_PP_ANY
VB_TRC -> V_TRANS_STEM NP_RC_ANY
)";

// Questions produced by fronting the main auxiliary.
constexpr const char* kQuestionOutput = R"(# fronted-main-auxiliary questions
ROOT -> QUEST_NONE [1]
ROOT -> QUEST_PPS [1]
ROOT -> QUEST_PPO [1]
ROOT -> QUEST_RCS [1]
ROOT -> QUEST_RCO [1]
QUEST_NONE -> SQ_NONE PUNCT_QUEST
QUEST_PPS -> SQ_PPS PUNCT_QUEST
QUEST_PPO -> SQ_PPO PUNCT_QUEST
QUEST_RCS -> SQ_RCS PUNCT_QUEST
QUEST_RCO -> SQ_RCO PUNCT_QUEST
SQ_NONE -> AUX_SG SI_NONE_SG
SQ_NONE -> AUX_PL SI_NONE_PL
SQ_PPS -> AUX_SG SI_PPS_SG
SQ_PPS -> AUX_PL SI_PPS_PL
SQ_RCS -> AUX_SG SI_RCS_SG
SQ_RCS -> AUX_PL SI_RCS_PL
SQ_PPO -> AUX_SG SI_PPO_SG
SQ_PPO -> AUX_PL SI_PPO_PL
SQ_RCO -> AUX_SG SI_RCO_SG
SQ_RCO -> AUX_PL SI_RCO_PL
SI_NONE_SG -> NP_SG VB
SI_NONE_PL -> NP_PL VB
SI_PPS_SG -> NP_PP_SG VB
SI_PPS_PL -> NP_PP_PL VB
SI_RCS_SG -> NP_RC_SG VB
SI_RCS_PL -> NP_RC_PL VB
SI_PPO_SG -> NP_SG VB_TPP
SI_PPO_PL -> NP_PL VB_TPP
SI_RCO_SG -> NP_SG VB_TRC
SI_RCO_PL -> NP_PL VB_TRC
NP_RC_SG -> NP_SG RC_SG
NP_RC_PL -> NP_PL RC_PL
RC_SG -> REL VP_SG
RC_PL -> REL VP_PL
VP_SG -> AUX_SG VB
VP_PL -> AUX_PL VB
)";

// Past tense carries no number, so reinflection predicates are not split.
constexpr const char* kReinflectionClauses = R"(# reinflection clauses
S_NONE -> NP_ANY VP
S_PPS -> NP_PP_ANY VP
S_RCS -> NP_RC_ANY VP
S_PPO -> NP_ANY VP_OPP
S_RCO -> NP_ANY VP_ORC
NP_RC_SG -> NP_SG RC
NP_RC_PL -> NP_PL RC
RC -> REL VP
)";

constexpr const char* kPastPredicates = R"(# inflected past predicates
VP -> V_INTR_PAST [1]
VP -> VB_T [1]
VB_T -> V_TRANS_PAST NP_ANY
VP_OPP -> V_TRANS_PAST NP_PP_ANY
VP_ORC -> V_TRANS_PAST NP_RC_ANY
)";

constexpr const char* kPastAuxPredicates = R"(# "did" + stem predicates
VP -> AUX_PAST VB
VP_OPP -> AUX_PAST VB_TPP
VP_ORC -> AUX_PAST VB_TRC
)";

const std::string& rules_for(GrammarKind kind) {
    static const std::string question = std::string(kShapes) + kQuestionClauses + kNounPhrases + kStemPredicates;
    static const std::string question_output = std::string(kQuestionOutput) + kNounPhrases + kStemPredicates;
    static const std::string reinflection =
        std::string(kShapes) + kReinflectionClauses + kNounPhrases + kPastPredicates;
    static const std::string reinflection_aux =
        std::string(kShapes) + kReinflectionClauses + kNounPhrases + kPastAuxPredicates + kStemPredicates;
    switch (kind) {
        case GrammarKind::Question:
            return question;
        case GrammarKind::QuestionOutput:
            return question_output;
        case GrammarKind::Reinflection:
            return reinflection;
        case GrammarKind::ReinflectionAux:
            return reinflection_aux;
    }
    throw ContractViolation("unknown grammar kind");
}

}  // namespace

std::string_view default_lexicon_text() { return kLexicon; }
std::string_view reduced_lexicon_text() { return kReducedLexicon; }
std::string_view default_rules_text(GrammarKind kind) { return rules_for(kind); }

Grammar default_grammar(GrammarKind kind) { return Grammar::parse(rules_for(kind), kLexicon); }

Grammar reduced_grammar(GrammarKind kind) { return Grammar::parse(rules_for(kind), kReducedLexicon); }

}  // namespace hbias
