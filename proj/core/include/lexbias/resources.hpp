#pragma once

#include <string_view>

// Data files compiled into the library from core/data/.
namespace lexbias::resources {

std::string_view stopwords_en();
std::string_view suffix_rules();
std::string_view lemma_exceptions();
std::string_view names_black();
std::string_view names_white();
std::string_view pleasant_terms();
std::string_view unpleasant_terms();

}  // namespace lexbias::resources
