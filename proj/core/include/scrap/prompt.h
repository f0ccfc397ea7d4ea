#pragma once

#include <string>
#include <vector>

#include "scrap/quad.h"

namespace scrap {

struct FewShotExample {
  std::string text_line;   // dataset-format line: sentence####quad literal
  std::string reasoning;
};

// The few-shot prompt that elicits extract-then-assign rationales. The
// default template carries a fixed task description, five worked examples,
// and the category/polarity vocabularies; its rendering is byte-stable.
struct PromptTemplate {
  std::string task_description;
  std::vector<FewShotExample> few_shot;
  std::vector<std::string> category_list;
  std::vector<std::string> polarity_list;
};

const PromptTemplate& default_prompt_template();

// "sentence####[['at', 'ac', 'sp', 'ot'], ...]" — the raw file layout.
std::string render_dataset_line(const Example& example);

// Deterministic rendering: task description, vocabulary lines, the five
// few-shot blocks in order, then the query block for `example` ending with
// an open "Reasoning:" slot.
std::string build_prompt(const Example& example, const PromptTemplate& tmpl);

}  // namespace scrap
