"""Hand-labeled fixture set for the five categorization schemes.

Every case is a model error (EM=0). Labels were assigned by hand-applying the
documented classifier rules; the suite requires 100% agreement, so this file
is the behavioral contract for the taxonomy module.

Each case: (id, question, context, gold_text, prediction,
            distractor_sentences, is_impossible, expected labels...).
Distractor sentences are given as verbatim substrings and converted to
character spans by the builder.
"""

from __future__ import annotations

from advqa.corpus import Answer, QAExample

CASES = [
    dict(
        id="t01",
        question="Who won Super Bowl 50?",
        context="The Denver Broncos defeated the Panthers. However, some sources claim the Panthers were expected to win but did not.",
        gold="Denver Broncos",
        pred="Panthers",
        distractors=["However, some sources claim the Panthers were expected to win but did not."],
        qt="Who", at="Short_Phrase", cx="Simple", et="Near_Distractor",
        patterns={"Negation", "Additive"},
    ),
    dict(
        id="t02",
        question="Who won the championship game?",
        context="The Denver Broncos defeated the Carolina Panthers in the final.",
        gold="Denver Broncos",
        pred="Broncos",
        qt="Who", at="Short_Phrase", cx="Simple", et="Partial",
        patterns=set(),
    ),
    dict(
        id="t03",
        question="When was the Eiffel Tower built?",
        context="The Eiffel Tower was built in 1889. The bridge nearby was finished in 1887.",
        gold="1889",
        pred="1887",
        qt="When", at="Year", cx="Simple", et="Wrong_Year",
        patterns={"Entity_Substitution", "Numeric"},
    ),
    dict(
        id="t04",
        question="What year did the company open?",
        context="The company opened in 1850. It grew quickly. The staff expanded. Some records indicate 1901 instead.",
        gold="1850",
        pred="1901",
        distractors=["Some records indicate 1901 instead."],
        qt="What", at="Year", cx="Simple", et="Distant_Distractor",
        patterns={"Entity_Substitution", "Numeric", "Additive"},
    ),
    dict(
        id="t05",
        question="Where was the final played?",
        context="The final was played in Denver. Fans came from Boston.",
        gold="Denver",
        pred="Boston",
        qt="Where", at="Location", cx="Simple", et="Wrong_Phrase",
        patterns={"Entity_Substitution"},
    ),
    dict(
        id="t06",
        question="What did the mayor announce?",
        context="The library was renovated in 1920. The mayor announced a new library.",
        gold="a new library",
        pred="1920",
        qt="What", at="Short_Phrase", cx="Simple", et="Other",
        patterns={"Numeric"},
    ),
    dict(
        id="t07",
        question="How many points did the team score?",
        context="The team scored 24 points in the game. The rivals scored 17 points.",
        gold="24",
        pred="17",
        qt="Number", at="Short_Phrase", cx="Counting", et="Wrong_Phrase",
        patterns={"Entity_Substitution", "Numeric"},
    ),
    dict(
        id="t08",
        question="How many goals did they score in the match?",
        context="The strikers scored 3 goals. The defenders scored 2 goals.",
        gold="3",
        pred="2",
        qt="Number", at="Short_Phrase", cx="Counting", et="Wrong_Phrase",
        patterns={"Coreference", "Entity_Substitution", "Numeric"},
    ),
    dict(
        id="t09",
        question="Why did the empire collapse?",
        context="The empire collapsed because the harvest failed. Some historians blame the plague.",
        gold="the harvest failed",
        pred="the plague",
        qt="WhyHow", at="Short_Phrase", cx="Causal", et="Wrong_Phrase",
        patterns=set(),
    ),
    dict(
        id="t10",
        question="How did the engineers manage to reinforce the aging bridge before the winter storms arrived?",
        context="Engineers reinforced the bridge with steel cables in November. The city delayed other projects.",
        gold="steel cables",
        pred="other projects",
        qt="WhyHow", at="Short_Phrase", cx="Complex", et="Wrong_Phrase",
        patterns={"Temporal"},
    ),
    dict(
        id="t11",
        question="What is the largest stadium in the country?",
        context="Morning Stadium is the largest venue in the region. Hilltop Arena holds fewer seats.",
        gold="Morning Stadium",
        pred="Hilltop Arena",
        qt="What", at="Venue", cx="Superlative", et="Wrong_Phrase",
        patterns={"Entity_Substitution", "ComparativeSuperlative"},
    ),
    dict(
        id="t12",
        question="Which city is larger than Springfield?",
        context="Portland is larger than Springfield. Salem is smaller.",
        gold="Portland",
        pred="Salem",
        qt="Other", at="Location", cx="Comparison", et="Other",
        patterns={"ComparativeSuperlative"},
    ),
    dict(
        id="t13",
        question="What is the capital and who governs the province?",
        context="The capital is Victoria. The governor runs the province from Victoria House.",
        gold="Victoria",
        pred="Victoria House",
        qt="What", at="Short_Phrase", cx="Multi_Part", et="Partial",
        patterns=set(),
    ),
    dict(
        id="t14",
        question="Who might lead the expedition?",
        context="Captain Reyes led the last expedition. Observers say the committee could choose Dr. Vega.",
        gold="Captain Reyes",
        pred="Dr. Vega",
        qt="Who", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Entity_Substitution", "Modal"},
    ),
    dict(
        id="t15",
        question="Who won the championship in Denver?",
        context="The Broncos won the championship in Denver. The Rockets won the championship in Denver.",
        gold="Broncos",
        pred="Rockets",
        qt="Who", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Paraphrase"},
    ),
    dict(
        id="t16",
        question="Who attended the summit?",
        context="The delegates included Laura Morgan, Robert King, and Susan Park. The reserve list named Brian Cole, Karen Fox, and David Hart, among others.",
        gold="Laura Morgan",
        pred="Brian Cole",
        qt="Who", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Entity_Substitution", "List_Enumeration"},
    ),
    dict(
        id="t17",
        question="Which team did not win the final?",
        context="The Sharks won the final. The Eagles lost the final.",
        gold="Eagles",
        pred="Sharks",
        qt="Other", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Negation"},
    ),
    dict(
        id="t18",
        question="What was the final score of the match?",
        context="The match ended 24-10 in the rain. The friendly match ended 31-7.",
        gold="24-10",
        pred="31-7",
        qt="What", at="Score", cx="Simple", et="Wrong_Phrase",
        patterns={"Numeric"},
    ),
    dict(
        id="t19",
        question="Where was the concert held?",
        context="The concert was held at Riverside Stadium. However, some sources claim it moved to Harbor Arena.",
        gold="Riverside Stadium",
        pred="Harbor Arena",
        distractors=["However, some sources claim it moved to Harbor Arena."],
        qt="Where", at="Venue", cx="Simple", et="Near_Distractor",
        patterns={"Entity_Substitution", "Additive"},
    ),
    dict(
        id="t20",
        question="When did the treaty take effect?",
        context="The treaty took effect on March 5, 1920. The accord was signed on June 2, 1919.",
        gold="March 5, 1920",
        pred="June 2, 1919",
        qt="When", at="Date", cx="Simple", et="Wrong_Phrase",
        patterns={"Entity_Substitution", "Numeric"},
    ),
    dict(
        id="t21",
        question="What did the committee recommend after the review?",
        context="The committee recommended that the city invest in flood defenses along the northern river basin. The council rejected the idea.",
        gold="that the city invest in flood defenses along the northern river basin",
        pred="the idea",
        qt="What", at="Long_Phrase", cx="Complex", et="Other",
        patterns={"Temporal"},
    ),
    dict(
        id="t22",
        question="Whose design won the contest?",
        context="The design by Marie Laurent won the contest. The entry by Victor Hugo placed second.",
        gold="Marie Laurent",
        pred="Victor Hugo",
        qt="Who", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Entity_Substitution"},
    ),
    dict(
        id="t23",
        question="Where was the author born?",
        context="The author was born in Greenville. The family moved to Nashville.",
        gold="Greenville",
        pred="Nashville",
        qt="Where", at="Location", cx="Simple", et="Wrong_Phrase",
        patterns={"Entity_Substitution"},
    ),
    dict(
        id="t24",
        question="How much did the renovation cost?",
        context="The renovation cost 2 million dollars. The extension cost 3 million dollars.",
        gold="2 million dollars",
        pred="3 million dollars",
        qt="Number", at="Short_Phrase", cx="Counting", et="Wrong_Phrase",
        patterns={"Numeric"},
    ),
    dict(
        id="t25",
        question="What could delay the launch?",
        context="Weather could delay the launch. Fuel leaks may also cause delays.",
        gold="Weather",
        pred="Fuel leaks",
        qt="What", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Modal"},
    ),
    dict(
        id="t26",
        question="When did the station open?",
        context="The station opened on 12/5/1920. The line closed in 1950.",
        gold="12/5/1920",
        pred="1950",
        qt="When", at="Date", cx="Simple", et="Other",
        patterns={"Numeric"},
    ),
    dict(
        id="t27",
        question="What year did the library open?",
        context="The library opened in 1901 and the museum opened in 1907.",
        gold="1901",
        pred="1907",
        qt="What", at="Year", cx="Simple", et="Wrong_Year",
        patterns={"Entity_Substitution", "Numeric"},
    ),
    dict(
        id="t28",
        question="Who directed the film?",
        context="The film was directed by Laura Chen last spring. Critics praised the work.",
        gold="Laura Chen",
        pred="Laura Chen last spring",
        qt="Who", at="Short_Phrase", cx="Simple", et="Partial",
        patterns=set(),
    ),
    dict(
        id="t29",
        question="Why didn't the team advance?",
        context="The team lost the semifinal. The coach resigned.",
        gold="lost the semifinal",
        pred="resigned",
        qt="WhyHow", at="Short_Phrase", cx="Causal", et="Wrong_Phrase",
        patterns={"Negation"},
    ),
    dict(
        id="t30",
        question="Which award did the author never win?",
        context="The author never won the Crescent Prize. She won the Harbor Medal twice.",
        gold="Crescent Prize",
        pred="Harbor Medal",
        qt="Other", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Negation"},
    ),
    dict(
        id="t31",
        question="Who repaired the engine?",
        context="Laura Chen repaired the engine. The apprentice couldn't finish the job.",
        gold="Laura Chen",
        pred="the apprentice",
        qt="Who", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Negation"},
    ),
    dict(
        id="t32",
        question="What was the original price?",
        context="The original price was 40 dollars. Contrary to popular belief, 60 dollars was never charged.",
        gold="40 dollars",
        pred="60 dollars",
        qt="What", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Negation", "Additive", "Numeric", "Entity_Substitution"},
    ),
    dict(
        id="t33",
        question="Where did the summit convene?",
        context="The summit convened in Geneva. Although Madrid hosted earlier sessions, the outcome was decided elsewhere.",
        gold="Geneva",
        pred="Madrid",
        qt="Where", at="Location", cx="Simple", et="Wrong_Phrase",
        patterns={"Entity_Substitution", "Additive", "Temporal"},
    ),
    dict(
        id="t34",
        question="What happened during the flood?",
        context="The bridge collapsed during the flood. The dam held firm.",
        gold="The bridge collapsed",
        pred="The dam held firm",
        qt="What", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Temporal"},
    ),
    dict(
        id="t35",
        question="What products did the firm export?",
        context="The firm exported goods such as copper, tin, and rubber. The rival exported wool.",
        gold="copper, tin, and rubber",
        pred="copper",
        qt="What", at="Short_Phrase", cx="Simple", et="Partial",
        patterns={"List_Enumeration"},
    ),
    dict(
        id="t36",
        question="How many medals did the teams win?",
        context="The teams won 12 medals. The squads took 9 and 7 medals, respectively.",
        gold="12",
        pred="9",
        qt="Number", at="Short_Phrase", cx="Counting", et="Wrong_Phrase",
        patterns={"Entity_Substitution", "Numeric", "List_Enumeration"},
    ),
    dict(
        id="t37",
        question="Which region produced the most grain?",
        context="The northern region produced the most grain. The southern region produced less.",
        gold="northern region",
        pred="southern region",
        qt="Other", at="Short_Phrase", cx="Superlative", et="Wrong_Phrase",
        patterns={"ComparativeSuperlative"},
    ),
    dict(
        id="t38",
        question="Who won the match versus the Sharks?",
        context="The Eagles won the match against the Sharks. The Falcons lost earlier.",
        gold="Eagles",
        pred="Falcons",
        qt="Who", at="Short_Phrase", cx="Comparison", et="Wrong_Phrase",
        patterns={"ComparativeSuperlative", "Temporal"},
    ),
    dict(
        id="t39",
        question="Who was the first governor of the territory?",
        context="Samuel Hayes served as the first governor. Later governors included Frank Doyle.",
        gold="Samuel Hayes",
        pred="Frank Doyle",
        qt="Who", at="Short_Phrase", cx="Superlative", et="Wrong_Phrase",
        patterns={"Entity_Substitution", "ComparativeSuperlative", "Temporal"},
    ),
    dict(
        id="t40",
        question="When did it finally reopen?",
        context="The theater reopened in 1946. The cinema reopened in 1951.",
        gold="1946",
        pred="1951",
        qt="When", at="Year", cx="Simple", et="Wrong_Year",
        patterns={"Coreference", "Entity_Substitution", "Numeric"},
    ),
    dict(
        id="t41",
        question="Who founded the institute?",
        context="Isaac Reed founded the institute. The campus grew. Students arrived. Funding doubled. Some records indicate Walter Payne instead.",
        gold="Isaac Reed",
        pred="Walter Payne",
        distractors=["Some records indicate Walter Payne instead."],
        qt="Who", at="Short_Phrase", cx="Simple", et="Distant_Distractor",
        patterns={"Entity_Substitution", "Additive"},
    ),
    dict(
        id="t42",
        question="What cargo did the ship carry?",
        context="The ship carried copper ore to Lisbon. The ship carried grain ore to Lisbon.",
        gold="copper ore",
        pred="grain ore",
        qt="What", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Paraphrase"},
    ),
    dict(
        id="t43",
        question="What did the inspector conclude?",
        context="The inspector concluded the tunnel was safe. Reviewers argue the tunnel must close.",
        gold="the tunnel was safe",
        pred="the tunnel must close",
        qt="What", at="Short_Phrase", cx="Simple", et="Wrong_Phrase",
        patterns={"Modal"},
    ),
    dict(
        id="t44",
        question="Where is the headquarters located?",
        context="The headquarters is located in France. The warehouse operates in Portugal.",
        gold="France",
        pred="Portugal",
        qt="Where", at="Location", cx="Simple", et="Wrong_Phrase",
        patterns={"Entity_Substitution"},
    ),
    dict(
        id="t45",
        question="What reform did the ministry propose for the struggling coastal fisheries after the collapse?",
        context="The ministry proposed a program of subsidies for fuel, new vessel licenses, and retraining grants. The union rejected it.",
        gold="a program of subsidies for fuel, new vessel licenses, and retraining grants",
        pred="retraining grants",
        qt="What", at="Long_Phrase", cx="Complex", et="Partial",
        patterns={"List_Enumeration", "Temporal"},
    ),
    dict(
        id="t46",
        question="What was the score of the first game?",
        context="The first game ended 14-3. However, some sources claim the score was 17-0.",
        gold="14-3",
        pred="17-0",
        distractors=["However, some sources claim the score was 17-0."],
        qt="What", at="Score", cx="Superlative", et="Near_Distractor",
        patterns={"Numeric", "Additive", "ComparativeSuperlative"},
    ),
    dict(
        id="t47",
        question="Who won the duel?",
        context="The duel was never fought. Both parties withdrew.",
        gold=None,
        pred="Both parties",
        impossible=True,
        qt="Who", at="Short_Phrase", cx="Simple", et="Other",
        patterns={"List_Enumeration"},
    ),
    dict(
        id="t48",
        question="Which arena held fewer than 5000 fans?",
        context="Harbor Arena held 4200 fans. Riverside Stadium held 9000 fans.",
        gold="Harbor Arena",
        pred="Riverside Stadium",
        qt="Other", at="Venue", cx="Comparison", et="Wrong_Phrase",
        patterns={"Entity_Substitution", "ComparativeSuperlative"},
    ),
    dict(
        id="t49",
        question="When does the festival begin?",
        context="The festival begins in March. The parade starts in June.",
        gold="March",
        pred="June",
        qt="When", at="Date", cx="Simple", et="Wrong_Phrase",
        patterns={"Entity_Substitution"},
    ),
    dict(
        id="t50",
        question="What device did the lab use to measure the signals that the probes returned?",
        context="The lab used a spark chamber. The probes returned weak signals.",
        gold="a spark chamber",
        pred="weak signals",
        qt="What", at="Short_Phrase", cx="Complex", et="Wrong_Phrase",
        patterns=set(),
    ),
]


def build_example(case: dict) -> QAExample:
    context = case["context"]
    spans = []
    for sentence in case.get("distractors", ()):
        start = context.index(sentence)
        spans.append((start, start + len(sentence)))
    if case.get("impossible"):
        answers = ()
    else:
        gold = case["gold"]
        answers = (Answer(gold, context.index(gold)),)
    return QAExample(
        id=case["id"],
        question=case["question"],
        context=context,
        answers=answers,
        is_impossible=bool(case.get("impossible")),
        distractor_spans=tuple(sorted(spans)),
    )
