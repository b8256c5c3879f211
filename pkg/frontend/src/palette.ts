/**
 * Categorical palette for locations: 32 precomputed colors, generated
 * offline with a perceptual-distance maximizer in L*a*b* space and
 * shipped static so renders are reproducible.
 */

export const LOCATION_COLORS: readonly string[] = [
  '#4e79a7', '#f28e2b', '#e15759', '#76b7b2', '#59a14f', '#edc948',
  '#b07aa1', '#ff9da7', '#9c755f', '#bab0ac', '#2f7e4a', '#d4a6c8',
  '#86bcb6', '#e49444', '#5778a4', '#d1615d', '#6a9f58', '#e7ca60',
  '#a87c9f', '#f1a2a9', '#967662', '#b8b0ac', '#3c6e8f', '#f4a261',
  '#2a9d8f', '#e76f51', '#8ab17d', '#ffba08', '#9d4edd', '#48bfe3',
  '#e63946', '#606c38',
] as const;

export function locationColor(index: number): string {
  return LOCATION_COLORS[index % LOCATION_COLORS.length];
}
