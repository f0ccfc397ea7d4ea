#include "scrap/prompt.h"

#include "scrap/dataset.h"

#include <sstream>

namespace scrap {

namespace {

constexpr std::string_view kTaskDescription =
    R"PRM(I am performing the ASQP task, which is the Subtask of ABSA. From now on, if I give you a sentence and a quadruplet, create a Reasoning for it. When creating, create to satisfy all of the following conditions: When proceeding with inference, extract the aspect term and the option term first and infer the aspect category and sentimental polarity based on them. When extracting aspect term and option term, an aspect category is judged by a combination of aspect term and opinion term, and sentimental polarity is judged by comprehensively considering everything. And don't mention each element first, explain the reason first, and then create a rationale that mentions the element. At this time, do not number each element, but configure it to naturally lead to one paragraph. But if there are more than two quadruplets, please organize the description for each quadruplet. And please create a detailed description of each element in the composition of rationale. From now on, I'll give you sentences and quadruplet sets as input.)PRM";

constexpr std::string_view kShotText1 =
    R"PRM(The fried dumplings are GREAT !####[['fried dumplings', 'food quality', 'positive', 'GREAT']])PRM";

constexpr std::string_view kShotReasoning1 =
    R"PRM(In this sentence, the aspect term is ‘fried dumplings’ and the opinion term for this aspect term is ‘GREAT’. Since the aspect term is ‘fried dumplings’ and the opinion about the aspect term is ‘GREAT’, the aspect category can be inferred as ‘food quality’ for this aspect term. Lastly, the aspect term ‘fried dumplings’ is evaluated as a opinion of ‘GREAT’. When it comes to food, the opinion 'GREAT' suggests that the food is delicious, which is evaluated as a positive sentiment.)PRM";

constexpr std::string_view kShotText2 =
    R"PRM(It's one of our favorite places to eat in NY.####[['NULL', 'restaurant general', 'positive', 'favorite']])PRM";

constexpr std::string_view kShotReasoning2 =
    R"PRM(In this sentence, there is no specific aspect term mentioned explicitly. So the aspect term is ‘NULL’ and the opinion term for this aspect term is ‘favorite’. The aspect category could be inferred as 'restaurant general' as the speaker is expressing a general sentiment about the restaurant rather than a specific feature or component. Lastly, by referring to the restaurant as a 'favorite', the speaker implies a positive sentiment polarity.)PRM";

constexpr std::string_view kShotText3 =
    R"PRM(It is very overpriced and not very tasty .####[['NULL', 'food quality', 'negative', 'not very tasty'], ['NULL', 'food prices', 'negative', 'overpriced']])PRM";

constexpr std::string_view kShotReasoning3 =
    R"PRM(In the sentence, there are two different evaluations made but none of them explicitly mentions the specific aspect term. So, for both evaluations, the aspect term is 'NULL'. For the first quadruplet, the opinion term is 'not very tasty'. This is a negative evaluation of the food quality, hence 'food quality' can be inferred as the aspect category and the sentiment polarity is negative. In the second quadruplet, the opinion term is 'overpriced'. This term is often used to describe something that is too expensive or not worth the price. Therefore, the aspect category can be inferred as 'food prices' and since the speaker is expressing a negative sentiment about the price, the sentiment polarity is negative.)PRM";

constexpr std::string_view kShotText4 =
    R"PRM(The service was friendly and the atmosphere was casual .####[['service', 'service general', 'positive', 'friendly'], ['atmosphere', 'ambience general', 'neutral', 'casual']])PRM";

constexpr std::string_view kShotReasoning4 =
    R"PRM(The sentence discusses two aspects - 'service' and 'atmosphere'. For the first quadruplet, the aspect term is 'service' and the opinion term is 'friendly'. This is a positive evaluation of the service provided by the restaurant, hence 'service general' can be inferred as the aspect category and the sentiment polarity is positive. In the second quadruplet, the aspect term is 'atmosphere' and the opinion term is 'casual'. This term is used to describe the general ambience of the restaurant. Therefore, the aspect category can be inferred as 'ambience general'. As the term 'casual' is neutral and doesn't indicate any positive or negative sentiment, the sentiment polarity is neutral.)PRM";

constexpr std::string_view kShotText5 =
    R"PRM(Rude service , medicore food ... there are tons of restaurants in NY ... stay away from this one####[['service', 'service general', 'negative', 'Rude'], ['food', 'food quality', 'neutral', 'medicore'], ['NULL', 'restaurant general', 'negative', 'stay away']])PRM";

constexpr std::string_view kShotReasoning5 =
    R"PRM(The sentence discusses three aspects - 'service', 'food', and the general experience at the restaurant (NULL). For the first quadruplet, the aspect term is 'service' and the opinion term is 'Rude'. This is a negative assessment of the service provided by the restaurant, hence 'service general' can be inferred as the aspect category and the sentiment polarity is negative. In the second quadruplet, the aspect term is 'food' and the opinion term is 'medicore'. This term is used to describe the quality of the food at the restaurant. Therefore, the aspect category can be inferred as 'food quality'. As the term 'medicore' is neutral and doesn't indicate any positive or negative sentiment, the sentiment polarity is neutral. In the third quadruplet, there is no specific aspect term mentioned, so the aspect term is 'NULL'. The opinion term is 'stay away'. This is a negative sentiment about the restaurant in general, hence 'restaurant general' can be inferred as the aspect category and the sentiment polarity is negative.)PRM";

std::string join_quoted(const std::vector<std::string>& items, const char* sep) {
  std::string out = "[";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += "'";
    out += items[i];
    out += "'";
  }
  out += "]";
  return out;
}

}  // namespace

const PromptTemplate& default_prompt_template() {
  static const PromptTemplate kTemplate = [] {
    PromptTemplate tmpl;
    tmpl.task_description = std::string(kTaskDescription);
    tmpl.few_shot = {
        {std::string(kShotText1), std::string(kShotReasoning1)},
        {std::string(kShotText2), std::string(kShotReasoning2)},
        {std::string(kShotText3), std::string(kShotReasoning3)},
        {std::string(kShotText4), std::string(kShotReasoning4)},
        {std::string(kShotText5), std::string(kShotReasoning5)},
    };
    for (auto label : category_vocab()) tmpl.category_list.emplace_back(label);
    // The prompt lists polarities in its own fixed order.
    tmpl.polarity_list = {"positive", "negative", "neutral"};
    return tmpl;
  }();
  return kTemplate;
}

std::string render_dataset_line(const Example& example) {
  return example.sentence + "####" + render_quad_literal(example.gold_quads);
}

std::string build_prompt(const Example& example, const PromptTemplate& tmpl) {
  std::ostringstream out;
  out << "[Task Description]\n" << tmpl.task_description << "\n\n";
  out << "Here are possible aspect category set: " << join_quoted(tmpl.category_list, "', '")
      << ".\n\n";
  out << "Here are possible sentiment polarity set: " << join_quoted(tmpl.polarity_list, "','")
      << ".\n\n";
  for (size_t i = 0; i < tmpl.few_shot.size(); ++i) {
    out << "[Example " << (i + 1) << "]\n";
    out << "Text: " << tmpl.few_shot[i].text_line << "\n";
    out << "Reasoning: " << tmpl.few_shot[i].reasoning << "\n\n";
  }
  out << "[Query]\nText: " << render_dataset_line(example) << "\nReasoning:";
  return out.str();
}

}  // namespace scrap
