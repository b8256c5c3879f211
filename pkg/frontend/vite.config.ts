import { defineConfig } from 'vitest/config';
import { fileURLToPath } from 'node:url';
import path from 'node:path';

const here = path.dirname(fileURLToPath(import.meta.url));

export default defineConfig({
  // serve the repository's sample strategies at /samples/ during dev
  publicDir: false,
  server: {
    fs: { allow: [here, path.resolve(here, '..', 'sample_strategies')] },
  },
  plugins: [
    {
      name: 'sample-strategies',
      configureServer(server) {
        server.middlewares.use('/samples', (req, res, next) => {
          const name = (req.url ?? '').replace(/^\//, '');
          if (!/^[\w.-]+\.json$/.test(name)) return next();
          const file = path.resolve(here, '..', 'sample_strategies', name);
          import('node:fs').then((fs) => {
            fs.readFile(file, (err, data) => {
              if (err) return next();
              res.setHeader('content-type', 'application/json');
              res.end(data);
            });
          });
        });
      },
    },
  ],
  test: {
    environment: 'node',
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
