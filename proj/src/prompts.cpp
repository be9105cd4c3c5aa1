#include "praise/prompts.hpp"

#include <map>
#include <stdexcept>

namespace praise::prompts {

namespace {

const std::string kGreatTemplate = R"PROMPT({{$problem_definition}}

[ouput format]
Your answer should be in the following json format
{
  "strategies": [
    "User [common verb] [appropriate object less than 5 words].",
    "User [common verb] [appropriate object less than 5 words].",
    ...
  ]
}

Below are the strategies created so far

[Effective strategies]
{{$effective_strategies}}

[Ineffective strategies]
{{$ineffective_strategies}}

Generate {{$strategy_num}} additional effective strategies that
you think would help your analysis.
answer:
)PROMPT";

const std::string kUnorthodoxTemplate = R"PROMPT([problem definition]
{{$problem_definition}}

[ouput format]
Your answer should be in the following json format
{
  "strategies": [
    "User [common verb] [appropriate object that fits the strategy].",
    "User [common verb] [appropriate object that fits the strategy].",
    ...
  ]
}

Below are the strategies created so far

[Effective strategies]
{{$effective_strategies}}

[Ineffective strategies]
{{$ineffective_strategies}}

In our opinion, the above strategies are too formulaic,
and sometimes crazy strategies that are completely weird
or nonsensical are more successful.

Generate {{$strategy_num}} strategies that sound like conversations
you'd have in a problem definition situation, but don't seem to have
anything to do with user satisfaction.

answer:
)PROMPT";

const std::string kPassageTemplate = R"PROMPT([query]
{{$query}}

Create {{$passage_num}} messages that you think would come up as search results
if I were to search for messages that match the query.
The messages should be very natural, colloquial, and provided
in bullet type.
Answers should be of varying lengths, including short sentences of
two to three words and longer sentences using up to 10 words.

your answers:
)PROMPT";

const std::string kCommonPrefix =
    "You are a competent bot that generates strategies to classify conversations in which the "
    "user expresses satisfaction.";

const std::string kMwozDefinition = kCommonPrefix + R"PROMPT(

The User and Assistant are having a conversation about making a reservation for a specific service, or looking up information such as an address or phone number.

The types of services include taxis, restaurants, buses, hotels, attractions, and trains.

The user asks a number of questions about the service, and their satisfaction depends on the assistant's answers.

Users are satisfied if the assistant answers their questions appropriately, but they are also dissatisfied if the service provider does not provide the information they asked for, regardless of the assistant's answer.
)PROMPT";

const std::string kSgdDefinition = kCommonPrefix + R"PROMPT(

Assistant is a virtual assistant that provides information about Alarm, Bank, transportation(bus, flight, etc.), reservation(rental car, restaurant etc.), Calendar, Event, Home, Hotel, Media, Movie, Music, Service, Travel, Weather and many other things people might want to know.

A typical satisfaction for a user is when they successfully make a reservation or find the assistant's suggestions helpful, and sometimes they are dissatisfied with the assistant's answer and ask for another alternative or decline.

Include specific context in your strategy for the information the assistant provides. (e.g. user requests a bus at a different time.)
)PROMPT";

const std::string kRedialDefinition = kCommonPrefix + R"PROMPT(

The user and the assistant have a conversation about movies, talking about the movies they've seen or recommending movies to each other.

The Assistant's suggestions, questions, and reactions have a significant impact on the user's satisfaction, which can be inferred from the user's conversations.

The main topics of conversation are the title, actors, and genre of the movie, but they also include casual conversation.
)PROMPT";

const std::string kGenericDefinition = kCommonPrefix + R"PROMPT(

The user and the assistant are having a task-oriented conversation. The user makes requests or asks questions, and their satisfaction depends on whether the assistant's answers meet their needs.

Users are satisfied when their requests are resolved, dissatisfied when the assistant fails to help or provides irrelevant answers, and neutral when they are still in the middle of an exchange or simply providing information.
)PROMPT";

const std::map<std::string, const std::string*> kDefinitions = {
    {"mwoz", &kMwozDefinition},
    {"sgd", &kSgdDefinition},
    {"redial", &kRedialDefinition},
    {"generic", &kGenericDefinition},
};

const std::map<std::string, std::vector<std::string>> kInitialStrategies = {
    {"mwoz",
     {"The user thanks the assistant.", "The user repeats the same question.",
      "The user asks about other services."}},
    {"redial",
     {"User asks for more movie recommendations.", "User expresses interest in a movie's director.",
      "User compliments assistant's choice.", "User requests further details on movie.",
      "User expresses interest in a specific genre."}},
    {"sgd",
     {"User expresses satisfaction with the service quality.",
      "User acknowledges assistant's quick thinking.", "User shows appreciation for assistance.",
      "User empathizes with the assistant.", "User appreciates the detailed explanation."}},
    {"generic",
     {"User thanks the assistant.", "User repeats the same question.",
      "User expresses frustration with the answer."}},
};

}  // namespace

const std::string& great_planner_template() { return kGreatTemplate; }
const std::string& unorthodox_planner_template() { return kUnorthodoxTemplate; }
const std::string& passage_generator_template() { return kPassageTemplate; }

std::vector<std::string> problem_definition_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, _] : kDefinitions) ids.push_back(id);
    return ids;
}

const std::string& problem_definition(const std::string& id) {
    auto it = kDefinitions.find(id);
    if (it == kDefinitions.end()) throw std::invalid_argument("unknown problem definition id: " + id);
    return *it->second;
}

const std::vector<std::string>& initial_strategies(const std::string& id) {
    auto it = kInitialStrategies.find(id);
    if (it == kInitialStrategies.end()) {
        throw std::invalid_argument("no initial strategies for dataset id: " + id);
    }
    return it->second;
}

CompletionRequest default_great_params() {
    return CompletionRequest{"gpt-4-1106-preview", "", 0.1, 512};
}

CompletionRequest default_unorthodox_params() {
    return CompletionRequest{"gpt-4-1106-preview", "", 0.7, 512};
}

CompletionRequest default_passage_params() {
    return CompletionRequest{"gpt-3.5-turbo-0125", "", 0.0, 1024};
}

}  // namespace praise::prompts
