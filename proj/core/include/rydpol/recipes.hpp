#pragma once

#include <span>
#include <string_view>

namespace rydpol
{
    struct Recipe
    {
        std::string_view name;
        std::string_view text;
    };

    // Configs shipped with the library, sorted by name.
    std::span<const Recipe> bundled_recipes();
    // nullptr when no recipe has that name.
    const Recipe* find_recipe(std::string_view name);
}
