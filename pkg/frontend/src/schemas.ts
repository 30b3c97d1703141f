// Contract schemas for every payload the console emits. A payload that
// fails these never leaves the client.

import { z } from "zod";

export const geoPointSchema = z.object({
  lat: z.number().finite().min(-90).max(90),
  lon: z.number().finite().min(-180).max(180),
});

export const potholeAttrsSchema = z
  .object({
    size: z.number().int().min(1).max(3),
    severity: z.number().int().min(1).max(4),
  })
  .strict();

export const speedBumpAttrsSchema = z
  .object({
    size: z.number().int().min(1).max(3),
    bump_count: z.number().int().min(1),
    labeled: z.boolean(),
  })
  .strict();

export const imagePayloadSchema = z
  .object({
    width: z.number().int().min(1),
    height: z.number().int().min(1),
    orientation: z.enum(["portrait", "landscape"]),
    quality: z.number().int().min(1).max(100),
    encoded_bytes: z.string().min(1),
    source_digest: z.string().min(1),
  })
  .refine(
    (img) => (img.orientation === "landscape") === (img.width >= img.height),
    { message: "orientation inconsistent with dimensions" },
  );

const timestampSchema = z
  .string()
  .regex(/^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z$/, "must be UTC ISO-8601 with Z");

export const hazardReportSchema = z
  .object({
    report_id: z.string().min(1),
    idempotency_key: z.string().min(1),
    user_id: z.string().min(1),
    hazard_type: z.enum(["pothole", "speed_bump"]),
    attrs: z.union([potholeAttrsSchema, speedBumpAttrsSchema]),
    road_type: z.string(),
    gps_location: geoPointSchema,
    corrected_location: geoPointSchema,
    image: imagePayloadSchema,
    created_at: timestampSchema,
  })
  .refine(
    (r) =>
      r.hazard_type === "pothole"
        ? potholeAttrsSchema.safeParse(r.attrs).success
        : speedBumpAttrsSchema.safeParse(r.attrs).success,
    { message: "attrs variant must match hazard_type" },
  );

export const mapItPinSchema = z.object({
  pin_id: z.string().min(1),
  user_id: z.string().min(1),
  hazard_type: z.enum(["pothole", "speed_bump"]),
  location: geoPointSchema,
  created_at: timestampSchema,
});

export const annotationPayloadSchema = z
  .object({
    worker_id: z.string().min(1),
    category: z.enum(["pothole", "speed_bump", "both", "uneven_or_cracked", "smooth"]),
    attrs: z
      .union([potholeAttrsSchema, speedBumpAttrsSchema])
      .nullable(),
    duration_s: z.number().min(0).max(300),
  })
  .refine(
    (a) =>
      a.category === "pothole"
        ? a.attrs !== null && potholeAttrsSchema.safeParse(a.attrs).success
        : a.category === "speed_bump"
          ? a.attrs !== null && speedBumpAttrsSchema.safeParse(a.attrs).success
          : a.attrs === null,
    { message: "attrs present iff category is pothole or speed_bump" },
  );
