#include "manuscriptor/paper.hpp"

#include "manuscriptor/textproc.hpp"

namespace manuscriptor {

std::string full_text(const Paper& paper) {
    std::string text = paper.title;
    text += '\n';
    text += paper.abstract;
    text += '\n';
    text += join_paragraphs(paper.body);
    return text;
}

std::string text_without_abstract(const Paper& paper) {
    std::string text = paper.title;
    text += '\n';
    text += join_paragraphs(paper.body);
    return text;
}

}  // namespace manuscriptor
